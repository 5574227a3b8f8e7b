#pragma once

#include <vector>

#include "modvar/module_point.hpp"

namespace modvar {

// Basis of the space of module homomorphisms M -> N, stored as
// vertex-indexed tuples theta_v (shape dM_v x dN_v) satisfying
//   X^M_a theta_{t(a)} = theta_{s(a)} X^N_a   for every arrow a.
template <class F>
struct HomBasis {
  std::vector<std::vector<Mat<F>>> elems;
  int dim() const { return static_cast<int>(elems.size()); }
};

// Basis of the derivation space of the generator form with values in
// Hom_k(M, N), one total dM x dN matrix per generator (idempotents
// first, then arrows), satisfying the linearized condition for every
// relation polynomial.
template <class F>
struct DerBasis {
  std::vector<std::vector<Mat<F>>> elems;
  int dim() const { return static_cast<int>(elems.size()); }
};

namespace detail {

// Stacked linear system for the intertwiner equations; columns are the
// vertex blocks theta_v vectorized row-major in vertex order.
template <class F>
Mat<F> hom_system(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  const F& k = m.field;
  const Quiver& q = m.pres->quiver;
  std::vector<int> col_off(static_cast<std::size_t>(q.num_vertices()) + 1, 0);
  for (int v = 0; v < q.num_vertices(); ++v)
    col_off[static_cast<std::size_t>(v) + 1] =
        col_off[static_cast<std::size_t>(v)] + m.dim_at(v) * n.dim_at(v);
  int rows = 0;
  for (const Arrow& ar : q.arrows) rows += m.dim_at(ar.source) * n.dim_at(ar.target);
  Mat<F> sys = zero_mat(k, rows, col_off.back());
  int row0 = 0;
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
    const Mat<F>& xm = m.arrow[static_cast<std::size_t>(a)];
    const Mat<F>& xn = n.arrow[static_cast<std::size_t>(a)];
    const int nt = n.dim_at(ar.target);
    // X^M_a theta_t : coefficient xm[r][i] on theta_t[i][c]
    for (int r = 0; r < m.dim_at(ar.source); ++r)
      for (int c = 0; c < nt; ++c) {
        int row = row0 + r * nt + c;
        for (int i = 0; i < m.dim_at(ar.target); ++i) {
          auto& cell = sys.at(row, col_off[static_cast<std::size_t>(ar.target)] + i * nt + c);
          cell = k.add(cell, xm.at(r, i));
        }
        // - theta_s X^N_a : coefficient -xn[j][c] on theta_s[r][j]
        for (int j = 0; j < n.dim_at(ar.source); ++j) {
          auto& cell = sys.at(row, col_off[static_cast<std::size_t>(ar.source)] +
                                       r * n.dim_at(ar.source) + j);
          cell = k.sub(cell, xn.at(j, c));
        }
      }
    row0 += m.dim_at(ar.source) * nt;
  }
  return sys;
}

}  // namespace detail

template <class F>
int hom_dim(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  require_compatible(m, n);
  Mat<F> sys = detail::hom_system(m, n);
  return sys.cols - rank(m.field, sys);
}

template <class F>
HomBasis<F> hom_basis(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  require_compatible(m, n);
  const F& k = m.field;
  const Quiver& q = m.pres->quiver;
  Mat<F> sys = detail::hom_system(m, n);
  HomBasis<F> basis;
  for (const Mat<F>& v : kernel_basis(k, sys)) {
    std::vector<Mat<F>> tuple;
    int off = 0;
    for (int vert = 0; vert < q.num_vertices(); ++vert) {
      Mat<F> th = zero_mat(k, m.dim_at(vert), n.dim_at(vert));
      for (int i = 0; i < th.rows; ++i)
        for (int j = 0; j < th.cols; ++j) th.at(i, j) = v.at(off + i * th.cols + j, 0);
      off += th.rows * th.cols;
      tuple.push_back(std::move(th));
    }
    basis.elems.push_back(std::move(tuple));
  }
  return basis;
}

template <class F>
int end_dim(const ModulePoint<F>& m) {
  return hom_dim(m, m);
}

template <class F>
bool verify_intertwiner(const ModulePoint<F>& m, const ModulePoint<F>& n,
                        const std::vector<Mat<F>>& theta) {
  const F& k = m.field;
  const Quiver& q = m.pres->quiver;
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
    Mat<F> lhs = mat_mul(k, m.arrow[static_cast<std::size_t>(a)],
                         theta[static_cast<std::size_t>(ar.target)]);
    Mat<F> rhs = mat_mul(k, theta[static_cast<std::size_t>(ar.source)],
                         n.arrow[static_cast<std::size_t>(a)]);
    if (!mat_eq(k, lhs, rhs)) return false;
  }
  return true;
}

// Total dM x dN matrix of a vertex-indexed hom tuple (block diagonal).
template <class F>
Mat<F> hom_tuple_total(const ModulePoint<F>& m, const ModulePoint<F>& n,
                       const std::vector<Mat<F>>& tuple) {
  Mat<F> t = zero_mat(m.field, m.total_dim(), n.total_dim());
  for (int v = 0; v < m.pres->quiver.num_vertices(); ++v)
    set_block(t, vertex_offset(m.dvec, v), vertex_offset(n.dvec, v),
              tuple[static_cast<std::size_t>(v)]);
  return t;
}

namespace detail {

// The arrow-block part of the derivation conditions. For valid module
// points the conditions coming from the idempotent-product, unit and
// compatibility relations determine every generator value from two kinds
// of free parameters: one matrix per ordered pair of distinct vertices
// (which turn out to be inner directions), and one d^M_{s(a)} x d^N_{t(a)}
// block per arrow. Only the user relations constrain the arrow blocks:
// for a relation sum_i c_i b_{i,1}...b_{i,r} the surviving condition is
//   sum_i c_i sum_j X^M_{b_{i,1}}..X^M_{b_{i,j-1}} G_{b_{i,j}} X^N_{b_{i,j+1}}..X^N_{b_{i,r}} = 0,
// the familiar product rule with the algebra acting through M on the
// left and N on the right. This is also exactly the condition for the
// block upper triangular middle term to satisfy the relations.
template <class F>
struct ArrowBlockSystem {
  Mat<F> sys;                 // rows: relation entries, cols: arrow blocks
  std::vector<int> col_off;   // per arrow, plus sentinel
};

template <class F>
ArrowBlockSystem<F> der_arrow_system(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  const F& k = m.field;
  const Quiver& q = m.pres->quiver;
  ArrowBlockSystem<F> out;
  out.col_off.assign(static_cast<std::size_t>(q.num_arrows()) + 1, 0);
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
    out.col_off[static_cast<std::size_t>(a) + 1] =
        out.col_off[static_cast<std::size_t>(a)] + m.dim_at(ar.source) * n.dim_at(ar.target);
  }
  int rows = 0;
  for (const Relation& rel : m.pres->relations) {
    int u = path_source(q, rel.terms.front().path);
    int v = path_target(q, rel.terms.front().path);
    rows += m.dim_at(u) * n.dim_at(v);
  }
  out.sys = zero_mat(k, rows, out.col_off.back());
  int row0 = 0;
  for (const Relation& rel : m.pres->relations) {
    int u = path_source(q, rel.terms.front().path);
    int v = path_target(q, rel.terms.front().path);
    const int nv = n.dim_at(v);
    for (const RelationTerm& term : rel.terms) {
      const auto coeff = k.from_fraction(term.coeff.num, term.coeff.den);
      const auto& w = term.path.arrows;
      const int len = static_cast<int>(w.size());
      // prefix products over M, suffix products over N
      std::vector<Mat<F>> pre(static_cast<std::size_t>(len));
      std::vector<Mat<F>> suf(static_cast<std::size_t>(len));
      Mat<F> acc = identity_mat(k, m.dim_at(u));
      for (int j = 0; j < len; ++j) {
        pre[static_cast<std::size_t>(j)] = acc;
        acc = mat_mul(k, acc, m.arrow[static_cast<std::size_t>(w[static_cast<std::size_t>(j)])]);
      }
      acc = identity_mat(k, n.dim_at(v));
      for (int j = len - 1; j >= 0; --j) {
        suf[static_cast<std::size_t>(j)] = acc;
        acc = mat_mul(k, n.arrow[static_cast<std::size_t>(w[static_cast<std::size_t>(j)])], acc);
      }
      for (int j = 0; j < len; ++j) {
        int a = w[static_cast<std::size_t>(j)];
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        const Mat<F>& P = pre[static_cast<std::size_t>(j)];
        const Mat<F>& S = suf[static_cast<std::size_t>(j)];
        const int bi = m.dim_at(ar.source), bj = n.dim_at(ar.target);
        for (int r = 0; r < P.rows; ++r)
          for (int i = 0; i < bi; ++i) {
            if (k.is_zero(P.at(r, i))) continue;
            const auto pc = k.mul(coeff, P.at(r, i));
            for (int jj = 0; jj < bj; ++jj)
              for (int c = 0; c < nv; ++c) {
                auto& cell = out.sys.at(row0 + r * nv + c,
                                        out.col_off[static_cast<std::size_t>(a)] + i * bj + jj);
                cell = k.add(cell, k.mul(pc, S.at(jj, c)));
              }
          }
      }
    }
    row0 += m.dim_at(u) * nv;
  }
  return out;
}

template <class F>
int cross_block_dim(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  int same = 0;
  for (int v = 0; v < m.pres->quiver.num_vertices(); ++v) same += m.dim_at(v) * n.dim_at(v);
  return m.total_dim() * n.total_dim() - same;
}

}  // namespace detail

// dim Der of the generator form with values in Hom_k(M, N). Both points
// must be valid module structures; the decomposition into inner cross
// directions plus the arrow-block system is only correct then.
template <class F>
int der_dim(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  require_compatible(m, n);
  if (!is_valid_point(m) || !is_valid_point(n))
    throw domain_error("der_dim: input is not a valid module point");
  auto abs = detail::der_arrow_system(m, n);
  int arrow_sol = abs.sys.cols - rank(m.field, abs.sys);
  return detail::cross_block_dim(m, n) + arrow_sol;
}

// Inner derivation attached to a total matrix theta in Hom_k(M, N):
// g |-> rho_M(g) theta - theta rho_N(g).
template <class F>
std::vector<Mat<F>> inner_derivation(const ModulePoint<F>& m, const ModulePoint<F>& n,
                                     const GeneratorForm& gf, const Mat<F>& theta) {
  std::vector<Mat<F>> tuple;
  for (int g = 0; g < gf.num_generators(); ++g) {
    Mat<F> gm = generator_image(m, gf, g);
    Mat<F> gn = generator_image(n, gf, g);
    tuple.push_back(mat_sub(m.field, mat_mul(m.field, gm, theta), mat_mul(m.field, theta, gn)));
  }
  return tuple;
}

// Basis of the derivation space with full generator-value tuples. The
// cross-vertex free parameters are realized as the inner derivations of
// the off-diagonal unit matrices; the arrow-block solutions have zero
// idempotent values.
template <class F>
DerBasis<F> der_basis(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  require_compatible(m, n);
  if (!is_valid_point(m) || !is_valid_point(n))
    throw domain_error("der_basis: input is not a valid module point");
  const F& k = m.field;
  const Quiver& q = m.pres->quiver;
  GeneratorForm gf = to_generator_form(*m.pres);
  DerBasis<F> basis;
  // cross-vertex inner directions
  for (int x = 0; x < q.num_vertices(); ++x)
    for (int y = 0; y < q.num_vertices(); ++y) {
      if (x == y) continue;
      for (int i = 0; i < m.dim_at(x); ++i)
        for (int j = 0; j < n.dim_at(y); ++j) {
          Mat<F> theta = zero_mat(k, m.total_dim(), n.total_dim());
          theta.at(vertex_offset(m.dvec, x) + i, vertex_offset(n.dvec, y) + j) = k.one();
          basis.elems.push_back(inner_derivation(m, n, gf, theta));
        }
    }
  // arrow-block solutions
  auto abs = detail::der_arrow_system(m, n);
  for (const Mat<F>& sol : kernel_basis(k, abs.sys)) {
    std::vector<Mat<F>> tuple;
    for (int g = 0; g < gf.num_vertices; ++g)
      tuple.push_back(zero_mat(k, m.total_dim(), n.total_dim()));
    for (int a = 0; a < q.num_arrows(); ++a) {
      const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
      Mat<F> d = zero_mat(k, m.total_dim(), n.total_dim());
      const int bj = n.dim_at(ar.target);
      for (int i = 0; i < m.dim_at(ar.source); ++i)
        for (int j = 0; j < bj; ++j)
          d.at(vertex_offset(m.dvec, ar.source) + i, vertex_offset(n.dvec, ar.target) + j) =
              sol.at(abs.col_off[static_cast<std::size_t>(a)] + i * bj + j, 0);
      tuple.push_back(std::move(d));
    }
    basis.elems.push_back(std::move(tuple));
  }
  return basis;
}

// dim of the inner derivation space, (dim M)(dim N) - dim Hom_A(M, N).
template <class F>
int inner_der_dim(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  return m.total_dim() * n.total_dim() - hom_dim(m, n);
}

// dim Ext^1(M, N) = dim Der + dim Hom - (dim M)(dim N). Negative values
// are impossible for valid inputs and signal a broken kernel.
template <class F>
int ext1_dim(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  int e = der_dim(m, n) + hom_dim(m, n) - m.total_dim() * n.total_dim();
  if (e < 0) throw internal_error("ext1_dim: negative value, hom/der kernel is inconsistent");
  return e;
}

// ---- reference derivation system (dense, straight from the product
// rule applied to every generator-form relation) -----------------------
//
// Unknowns are full generator-value tuples. This is the slow path the
// structured computation above is checked against; the census module
// provides a third, enumeration-based route.

template <class F>
Mat<F> der_system_reference(const ModulePoint<F>& m, const ModulePoint<F>& n,
                            const GeneratorForm& gf) {
  const F& k = m.field;
  const int dm = m.total_dim(), dn = n.total_dim();
  const int block = dm * dn;
  std::vector<Mat<F>> gm, gn;
  for (int g = 0; g < gf.num_generators(); ++g) {
    gm.push_back(generator_image(m, gf, g));
    gn.push_back(generator_image(n, gf, g));
  }
  Mat<F> sys = zero_mat(k, static_cast<int>(gf.relations.size()) * block,
                        gf.num_generators() * block);
  int row0 = 0;
  for (const NCPoly& poly : gf.relations) {
    for (const NCTerm& term : poly) {
      const auto coeff = k.from_fraction(term.coeff.num, term.coeff.den);
      const int len = static_cast<int>(term.word.size());
      std::vector<Mat<F>> pre(static_cast<std::size_t>(len));
      std::vector<Mat<F>> suf(static_cast<std::size_t>(len));
      Mat<F> acc = identity_mat(k, dm);
      for (int j = 0; j < len; ++j) {
        pre[static_cast<std::size_t>(j)] = acc;
        acc = mat_mul(k, acc, gm[static_cast<std::size_t>(term.word[static_cast<std::size_t>(j)])]);
      }
      acc = identity_mat(k, dn);
      for (int j = len - 1; j >= 0; --j) {
        suf[static_cast<std::size_t>(j)] = acc;
        acc = mat_mul(k, gn[static_cast<std::size_t>(term.word[static_cast<std::size_t>(j)])], acc);
      }
      for (int j = 0; j < len; ++j) {
        int g = term.word[static_cast<std::size_t>(j)];
        const Mat<F>& P = pre[static_cast<std::size_t>(j)];
        const Mat<F>& S = suf[static_cast<std::size_t>(j)];
        for (int r = 0; r < dm; ++r)
          for (int i = 0; i < dm; ++i) {
            if (k.is_zero(P.at(r, i))) continue;
            const auto pc = k.mul(coeff, P.at(r, i));
            for (int jj = 0; jj < dn; ++jj)
              for (int c = 0; c < dn; ++c) {
                if (k.is_zero(S.at(jj, c))) continue;
                auto& cell = sys.at(row0 + r * dn + c, g * block + i * dn + jj);
                cell = k.add(cell, k.mul(pc, S.at(jj, c)));
              }
          }
      }
    }
    row0 += block;
  }
  return sys;
}

template <class F>
int der_dim_reference(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  require_compatible(m, n);
  GeneratorForm gf = to_generator_form(*m.pres);
  Mat<F> sys = der_system_reference(m, n, gf);
  return sys.cols - rank(m.field, sys);
}

// Evaluates the product-rule expansion of every generator-form relation
// on a generator-value tuple; returns indices of violated relations.
template <class F>
std::vector<int> check_derivation(const ModulePoint<F>& m, const ModulePoint<F>& n,
                                  const GeneratorForm& gf, const std::vector<Mat<F>>& tuple) {
  const F& k = m.field;
  const int dm = m.total_dim(), dn = n.total_dim();
  std::vector<Mat<F>> gm, gn;
  for (int g = 0; g < gf.num_generators(); ++g) {
    gm.push_back(generator_image(m, gf, g));
    gn.push_back(generator_image(n, gf, g));
  }
  std::vector<int> bad;
  for (std::size_t rIdx = 0; rIdx < gf.relations.size(); ++rIdx) {
    Mat<F> acc = zero_mat(k, dm, dn);
    for (const NCTerm& term : gf.relations[rIdx]) {
      const auto coeff = k.from_fraction(term.coeff.num, term.coeff.den);
      const int len = static_cast<int>(term.word.size());
      for (int j = 0; j < len; ++j) {
        Mat<F> val = identity_mat(k, dm);
        for (int l = 0; l < j; ++l)
          val = mat_mul(k, val, gm[static_cast<std::size_t>(term.word[static_cast<std::size_t>(l)])]);
        val = mat_mul(k, val, tuple[static_cast<std::size_t>(term.word[static_cast<std::size_t>(j)])]);
        for (int l = j + 1; l < len; ++l)
          val = mat_mul(k, val, gn[static_cast<std::size_t>(term.word[static_cast<std::size_t>(l)])]);
        acc = mat_add(k, acc, mat_scale(k, coeff, val));
      }
    }
    if (!mat_is_zero(k, acc)) bad.push_back(static_cast<int>(rIdx));
  }
  return bad;
}

// Matrix of the inner-derivation map theta |-> (rho_M(g) theta - theta rho_N(g))_g;
// its rank is an independent route to inner_der_dim.
template <class F>
Mat<F> inner_map_matrix(const ModulePoint<F>& m, const ModulePoint<F>& n,
                        const GeneratorForm& gf) {
  const F& k = m.field;
  const int dm = m.total_dim(), dn = n.total_dim();
  const int block = dm * dn;
  Mat<F> map = zero_mat(k, gf.num_generators() * block, block);
  for (int g = 0; g < gf.num_generators(); ++g) {
    Mat<F> gm = generator_image(m, gf, g);
    Mat<F> gn = generator_image(n, gf, g);
    for (int r = 0; r < dm; ++r)
      for (int c = 0; c < dn; ++c) {
        int row = g * block + r * dn + c;
        for (int i = 0; i < dm; ++i) {
          auto& cell = map.at(row, i * dn + c);
          cell = k.add(cell, gm.at(r, i));
        }
        for (int j = 0; j < dn; ++j) {
          auto& cell = map.at(row, r * dn + j);
          cell = k.sub(cell, gn.at(j, c));
        }
      }
  }
  return map;
}

// Solves rho_M(g) theta - theta rho_N(g) = tuple(g) for a total matrix
// theta, i.e. decides whether a derivation is inner and produces the
// witness. Returns nullopt when the derivation class is nonzero.
template <class F>
std::optional<Mat<F>> solve_inner(const ModulePoint<F>& m, const ModulePoint<F>& n,
                                  const GeneratorForm& gf, const std::vector<Mat<F>>& tuple) {
  const F& k = m.field;
  const int dm = m.total_dim(), dn = n.total_dim();
  Mat<F> map = inner_map_matrix(m, n, gf);
  Mat<F> rhs = zero_mat(k, map.rows, 1);
  for (int g = 0; g < gf.num_generators(); ++g)
    for (int r = 0; r < dm; ++r)
      for (int c = 0; c < dn; ++c)
        rhs.at(g * dm * dn + r * dn + c, 0) = tuple[static_cast<std::size_t>(g)].at(r, c);
  auto sol = solve_linear(k, map, rhs);
  if (!sol) return std::nullopt;
  Mat<F> theta = zero_mat(k, dm, dn);
  for (int r = 0; r < dm; ++r)
    for (int c = 0; c < dn; ++c) theta.at(r, c) = sol->at(r * dn + c, 0);
  return theta;
}

// Middle term of the extension attached to a derivation value: per
// vertex the coordinates are [M1-part | M2-part], per arrow the matrix
// is [[X1, delta],[0, X2]] where delta is the (s(a), t(a)) block of the
// derivation's value on that arrow. The last-d2 coordinates form a
// submodule isomorphic to M2 and the quotient is M1. Derivation values
// on idempotents are inner directions and do not change the isomorphism
// class of the middle term; only the arrow blocks enter.
template <class F>
ModulePoint<F> extension_from_derivation(const ModulePoint<F>& m1, const ModulePoint<F>& m2,
                                         const std::vector<Mat<F>>& dval) {
  require_compatible(m1, m2);
  const F& k = m1.field;
  const Quiver& q = m1.pres->quiver;
  GeneratorForm gf = to_generator_form(*m1.pres);
  if (static_cast<int>(dval.size()) != gf.num_generators())
    throw domain_error("extension_from_derivation: wrong tuple length");
  DimVec d;
  d.d.assign(static_cast<std::size_t>(q.num_vertices()), 0);
  for (int v = 0; v < q.num_vertices(); ++v)
    d.d[static_cast<std::size_t>(v)] = m1.dim_at(v) + m2.dim_at(v);
  std::vector<Mat<F>> arrows;
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
    const Mat<F>& dv = dval[static_cast<std::size_t>(gf.arrow_gen(a))];
    if (dv.rows != m1.total_dim() || dv.cols != m2.total_dim())
      throw domain_error("extension_from_derivation: tuple entry has wrong shape");
    Mat<F> x = zero_mat(k, d.d[static_cast<std::size_t>(ar.source)],
                        d.d[static_cast<std::size_t>(ar.target)]);
    set_block(x, 0, 0, m1.arrow[static_cast<std::size_t>(a)]);
    Mat<F> delta = get_block(k, dv, vertex_offset(m1.dvec, ar.source),
                             vertex_offset(m2.dvec, ar.target), m1.dim_at(ar.source),
                             m2.dim_at(ar.target));
    set_block(x, 0, m1.dim_at(ar.target), delta);
    set_block(x, m1.dim_at(ar.source), m1.dim_at(ar.target),
              m2.arrow[static_cast<std::size_t>(a)]);
    arrows.push_back(std::move(x));
  }
  return make_point(m1.pres, k, std::move(d), std::move(arrows));
}

// Random element of the derivation space with zero idempotent values;
// exactly what extension sampling needs, without materializing a basis
// of the inner directions.
template <class F>
std::vector<Mat<F>> sample_arrow_derivation(const ModulePoint<F>& m, const ModulePoint<F>& n,
                                            Rng& rng) {
  const F& k = m.field;
  const Quiver& q = m.pres->quiver;
  GeneratorForm gf = to_generator_form(*m.pres);
  auto abs = detail::der_arrow_system(m, n);
  auto kb = kernel_basis(k, abs.sys);
  Mat<F> combined = zero_mat(k, abs.sys.cols, 1);
  for (const Mat<F>& v : kb) {
    auto c = k.sample(rng);
    for (int i = 0; i < combined.rows; ++i)
      combined.at(i, 0) = k.add(combined.at(i, 0), k.mul(c, v.at(i, 0)));
  }
  std::vector<Mat<F>> tuple;
  for (int g = 0; g < gf.num_vertices; ++g)
    tuple.push_back(zero_mat(k, m.total_dim(), n.total_dim()));
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
    Mat<F> dmat = zero_mat(k, m.total_dim(), n.total_dim());
    const int bj = n.dim_at(ar.target);
    for (int i = 0; i < m.dim_at(ar.source); ++i)
      for (int j = 0; j < bj; ++j)
        dmat.at(vertex_offset(m.dvec, ar.source) + i, vertex_offset(n.dvec, ar.target) + j) =
            combined.at(abs.col_off[static_cast<std::size_t>(a)] + i * bj + j, 0);
    tuple.push_back(std::move(dmat));
  }
  return tuple;
}

}  // namespace modvar
