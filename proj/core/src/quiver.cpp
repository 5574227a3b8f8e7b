#include "modvar/quiver.hpp"

#include <set>

namespace modvar {

int Quiver::vertex_index(const std::string& name) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == name) return static_cast<int>(i);
  return -1;
}

int Quiver::arrow_index(const std::string& name) const {
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].name == name) return static_cast<int>(i);
  return -1;
}

int path_source(const Quiver& q, const PathWord& w) {
  if (w.arrows.empty()) throw domain_error("path_source: empty path");
  return q.arrows[static_cast<std::size_t>(w.arrows.front())].source;
}

int path_target(const Quiver& q, const PathWord& w) {
  if (w.arrows.empty()) throw domain_error("path_target: empty path");
  return q.arrows[static_cast<std::size_t>(w.arrows.back())].target;
}

static void validate_path(const Quiver& q, const PathWord& w) {
  if (w.arrows.empty()) throw domain_error("relation term has an empty path");
  for (std::size_t i = 0; i < w.arrows.size(); ++i) {
    int a = w.arrows[i];
    if (a < 0 || a >= q.num_arrows()) throw domain_error("relation references unknown arrow");
    if (i + 1 < w.arrows.size()) {
      int b = w.arrows[i + 1];
      if (q.arrows[static_cast<std::size_t>(a)].target !=
          q.arrows[static_cast<std::size_t>(b)].source)
        throw domain_error("non-composable path: target of '" +
                           q.arrows[static_cast<std::size_t>(a)].name +
                           "' differs from source of '" +
                           q.arrows[static_cast<std::size_t>(b)].name + "'");
    }
  }
}

void validate_presentation(const AlgebraPresentation& p) {
  const Quiver& q = p.quiver;
  std::set<std::string> names;
  for (const auto& v : q.vertices)
    if (!names.insert(v).second) throw domain_error("duplicate vertex name '" + v + "'");
  for (const auto& a : q.arrows) {
    if (!names.insert(a.name).second) throw domain_error("duplicate name '" + a.name + "'");
    if (a.source < 0 || a.source >= q.num_vertices() || a.target < 0 ||
        a.target >= q.num_vertices())
      throw domain_error("arrow '" + a.name + "' references an undeclared vertex");
  }
  for (const auto& rel : p.relations) {
    if (rel.terms.empty()) throw domain_error("empty relation");
    for (const auto& t : rel.terms) {
      if (t.coeff.num == 0) throw domain_error("relation stores a zero coefficient");
      if (t.coeff.den == 0) throw domain_error("relation coefficient has zero denominator");
      validate_path(q, t.path);
    }
    int s = path_source(q, rel.terms.front().path);
    int t = path_target(q, rel.terms.front().path);
    for (const auto& term : rel.terms)
      if (path_source(q, term.path) != s || path_target(q, term.path) != t)
        throw domain_error("relation mixes non-parallel paths");
  }
}

long long ringel_form(const Quiver& q, const DimVec& a, const DimVec& b) {
  if (a.size() != q.num_vertices() || b.size() != q.num_vertices())
    throw domain_error("ringel_form: dimension vector does not match vertex count");
  long long v = 0;
  for (int i = 0; i < q.num_vertices(); ++i)
    v += static_cast<long long>(a.d[static_cast<std::size_t>(i)]) *
         b.d[static_cast<std::size_t>(i)];
  for (const auto& ar : q.arrows)
    v -= static_cast<long long>(a.d[static_cast<std::size_t>(ar.source)]) *
         b.d[static_cast<std::size_t>(ar.target)];
  return v;
}

}  // namespace modvar
