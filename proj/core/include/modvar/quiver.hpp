#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modvar/field.hpp"

namespace modvar {

struct Arrow {
  std::string name;
  int source = 0;  // vertex index
  int target = 0;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  int vertex_index(const std::string& name) const;  // -1 if unknown
  int arrow_index(const std::string& name) const;   // -1 if unknown
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_arrows() const { return static_cast<int>(arrows.size()); }
};

// A path written left to right: the arrow at position 0 is applied
// first. Consecutive arrows must compose (target of each equals source
// of the next).
struct PathWord {
  std::vector<int> arrows;  // arrow indices
};

// Exact rational coefficient of a relation term. Presentations are
// field-agnostic; coefficients embed into a concrete field on demand.
struct Coeff {
  long long num = 0;
  long long den = 1;
};

struct RelationTerm {
  Coeff coeff;
  PathWord path;
};

// Linear combination of parallel paths (same source, same target).
struct Relation {
  std::vector<RelationTerm> terms;
};

struct AlgebraPresentation {
  std::string label;
  Quiver quiver;
  std::vector<Relation> relations;
};

// Per-vertex dimensions; total() is their sum.
struct DimVec {
  std::vector<int> d;

  int total() const {
    int t = 0;
    for (int x : d) t += x;
    return t;
  }
  int size() const { return static_cast<int>(d.size()); }
  bool operator==(const DimVec&) const = default;
};

// Checks structural invariants (unique names, declared endpoints,
// composable parallel relation terms, no zero coefficients); throws
// domain_error with a description on the first violation.
void validate_presentation(const AlgebraPresentation& p);

// Source / target vertex of a path in the given quiver; paths must be
// nonempty and composable (checked).
int path_source(const Quiver& q, const PathWord& w);
int path_target(const Quiver& q, const PathWord& w);

// The Euler/Ringel bilinear form of a quiver without relations:
//   <a,b> = sum_v a_v b_v - sum_{arrows u->v} a_u b_v.
// Throws domain_error when a dimension vector does not match the vertex
// count. The value can be negative.
long long ringel_form(const Quiver& q, const DimVec& a, const DimVec& b);

}  // namespace modvar
