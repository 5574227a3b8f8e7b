#include "modvar/component_graph.hpp"

#include <sstream>

namespace modvar {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string component_graph_dot(const ComponentGraph& g) {
  std::ostringstream os;
  os << "digraph components {\n";
  for (const auto& l : g.labels) os << "  " << quote(l) << ";\n";
  for (auto [i, j] : g.edges)
    os << "  " << quote(g.labels[static_cast<std::size_t>(i)]) << " -> "
       << quote(g.labels[static_cast<std::size_t>(j)]) << " [dir=both];\n";
  for (auto [i, j] : g.arrows) {
    bool in_edge = false;
    for (auto [a, b] : g.edges)
      if ((a == i && b == j) || (a == j && b == i)) in_edge = true;
    if (!in_edge)
      os << "  " << quote(g.labels[static_cast<std::size_t>(i)]) << " -> "
         << quote(g.labels[static_cast<std::size_t>(j)]) << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace modvar
