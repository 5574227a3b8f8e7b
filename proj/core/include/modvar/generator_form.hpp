#pragma once

#include <vector>

#include "modvar/quiver.hpp"

namespace modvar {

// Word in the free algebra on the generator list; empty word is the unit.
using NCWord = std::vector<int>;

struct NCTerm {
  Coeff coeff;
  NCWord word;
};

// Noncommutative polynomial over the free algebra on the generators.
using NCPoly = std::vector<NCTerm>;

// Generator/relation form of a presentation over the free algebra.
// Generators are ordered: one idempotent per vertex, then one generator
// per arrow. The relation list is, in order:
//   e_u e_v - delta_{uv} e_u           for all ordered pairs (u, v)
//   (sum_v e_v) - 1
//   e_{s(a)} a - a  and  a e_{t(a)} - a  for every arrow a
//   every user relation, paths rewritten as words in the arrow generators
struct GeneratorForm {
  int num_vertices = 0;
  int num_arrows = 0;
  std::vector<NCPoly> relations;
  int num_user_relations = 0;  // trailing entries of `relations`

  int num_generators() const { return num_vertices + num_arrows; }
  int idempotent_gen(int v) const { return v; }
  int arrow_gen(int a) const { return num_vertices + a; }
  bool is_arrow_gen(int g) const { return g >= num_vertices; }
};

GeneratorForm to_generator_form(const AlgebraPresentation& p);

// The user relation (index into p.relations) as a word polynomial in the
// arrow generators of the form.
NCPoly user_relation_poly(const GeneratorForm& gf, const Relation& rel);

}  // namespace modvar
