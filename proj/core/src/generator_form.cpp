#include "modvar/generator_form.hpp"

namespace modvar {

NCPoly user_relation_poly(const GeneratorForm& gf, const Relation& rel) {
  NCPoly poly;
  for (const RelationTerm& t : rel.terms) {
    NCTerm term;
    term.coeff = t.coeff;
    for (int a : t.path.arrows) term.word.push_back(gf.arrow_gen(a));
    poly.push_back(std::move(term));
  }
  return poly;
}

GeneratorForm to_generator_form(const AlgebraPresentation& p) {
  GeneratorForm gf;
  gf.num_vertices = p.quiver.num_vertices();
  gf.num_arrows = p.quiver.num_arrows();

  const Coeff one{1, 1};
  const Coeff minus_one{-1, 1};

  // e_u e_v - delta_{uv} e_u
  for (int u = 0; u < gf.num_vertices; ++u)
    for (int v = 0; v < gf.num_vertices; ++v) {
      NCPoly poly;
      poly.push_back({one, {gf.idempotent_gen(u), gf.idempotent_gen(v)}});
      if (u == v) poly.push_back({minus_one, {gf.idempotent_gen(u)}});
      gf.relations.push_back(std::move(poly));
    }

  // (sum_v e_v) - 1
  {
    NCPoly poly;
    for (int v = 0; v < gf.num_vertices; ++v) poly.push_back({one, {gf.idempotent_gen(v)}});
    poly.push_back({minus_one, {}});
    gf.relations.push_back(std::move(poly));
  }

  // e_{s(a)} a - a  and  a e_{t(a)} - a
  for (int a = 0; a < gf.num_arrows; ++a) {
    const Arrow& ar = p.quiver.arrows[static_cast<std::size_t>(a)];
    {
      NCPoly poly;
      poly.push_back({one, {gf.idempotent_gen(ar.source), gf.arrow_gen(a)}});
      poly.push_back({minus_one, {gf.arrow_gen(a)}});
      gf.relations.push_back(std::move(poly));
    }
    {
      NCPoly poly;
      poly.push_back({one, {gf.arrow_gen(a), gf.idempotent_gen(ar.target)}});
      poly.push_back({minus_one, {gf.arrow_gen(a)}});
      gf.relations.push_back(std::move(poly));
    }
  }

  for (const Relation& rel : p.relations) gf.relations.push_back(user_relation_poly(gf, rel));
  gf.num_user_relations = static_cast<int>(p.relations.size());
  return gf;
}

}  // namespace modvar
