#pragma once

#include <string>
#include <vector>

namespace modvar {

// Directed graph on family labels. An arrow i -> j records that the
// generic extension space of (part j, part i) vanished; an undirected
// edge is present when both directed arrows are.
struct ComponentGraph {
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> arrows;  // (from, to), from != to
  std::vector<std::pair<int, int>> edges;   // i < j, both arrows present

  bool has_arrow(int from, int to) const {
    for (auto [a, b] : arrows)
      if (a == from && b == to) return true;
    return false;
  }
};

// DOT rendering: plain arrows for one-directional entries, a single
// dir=both edge where both directions are present.
std::string component_graph_dot(const ComponentGraph& g);

}  // namespace modvar
