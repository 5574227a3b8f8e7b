#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>

#include "modvar/component_graph.hpp"
#include "modvar/decompose.hpp"
#include "modvar/hom_der.hpp"
#include "modvar/poly_system.hpp"

namespace modvar {

inline constexpr int kDefaultTrials = 5;

// Presentation of an irreducible constructible family of module points:
//   orbit     - the closure of the base-change orbit of one point
//   repspace  - the whole graded space (relation-free presentations only)
//   slice     - arrows from a fixed set act as zero, the rest are free;
//               only valid when every relation dies on the slice
//   sum       - closures of direct sums of members of the children
//   extfam    - extensions with sub from children[1] and quotient from
//               children[0]
template <class F>
struct FamilyExpr {
  enum class Kind { orbit, repspace, slice, sum, extfam };

  Kind kind = Kind::orbit;
  std::string label;
  std::shared_ptr<const AlgebraPresentation> pres;
  F field;
  DimVec dvec;  // of the whole family
  std::optional<ModulePoint<F>> point;           // orbit
  std::vector<int> zeroed;                       // slice: arrow indices
  std::vector<std::shared_ptr<const FamilyExpr<F>>> children;
};

template <class F>
using FamilyPtr = std::shared_ptr<const FamilyExpr<F>>;

// True when every defining equation of the variety becomes the zero
// polynomial after the symbolic substitution (zeroed arrows -> 0).
// Entries through zero-dimensional vertices have no equations at all,
// which handles the degenerate slices exactly.
inline bool slice_valid(const AlgebraPresentation& pres, const DimVec& d,
                        const std::vector<int>& zeroed_arrows) {
  PolySystem sys = variety_equations(pres, d);
  std::vector<int> vars;
  for (int a : zeroed_arrows)
    for (int v = sys.var_off[static_cast<std::size_t>(a)];
         v < sys.var_off[static_cast<std::size_t>(a) + 1]; ++v)
      vars.push_back(v);
  PolySystem cut = substitute_zero(sys, vars);
  for (const Poly& p : cut.equations)
    if (!p.is_zero()) return false;
  return true;
}

template <class F>
FamilyPtr<F> make_orbit(std::string label, ModulePoint<F> m) {
  if (!is_valid_point(m)) throw domain_error("orbit family: point is not a valid module structure");
  auto f = std::make_shared<FamilyExpr<F>>();
  f->kind = FamilyExpr<F>::Kind::orbit;
  f->label = std::move(label);
  f->pres = m.pres;
  f->field = m.field;
  f->dvec = m.dvec;
  f->point = std::move(m);
  return f;
}

template <class F>
FamilyPtr<F> make_repspace(std::string label, std::shared_ptr<const AlgebraPresentation> pres,
                           const F& field, DimVec d) {
  if (!pres->relations.empty())
    throw domain_error("repspace family: presentation has relations; use a slice");
  if (d.size() != pres->quiver.num_vertices())
    throw domain_error("repspace family: dimension vector does not match vertex count");
  auto f = std::make_shared<FamilyExpr<F>>();
  f->kind = FamilyExpr<F>::Kind::repspace;
  f->label = std::move(label);
  f->pres = std::move(pres);
  f->field = field;
  f->dvec = std::move(d);
  return f;
}

template <class F>
FamilyPtr<F> make_slice(std::string label, std::shared_ptr<const AlgebraPresentation> pres,
                        const F& field, DimVec d, std::vector<int> zeroed_arrows) {
  if (d.size() != pres->quiver.num_vertices())
    throw domain_error("slice family: dimension vector does not match vertex count");
  for (int a : zeroed_arrows)
    if (a < 0 || a >= pres->quiver.num_arrows())
      throw domain_error("slice family: unknown arrow index");
  if (!slice_valid(*pres, d, zeroed_arrows))
    throw domain_error("slice family: relations do not vanish identically on the slice");
  auto f = std::make_shared<FamilyExpr<F>>();
  f->kind = FamilyExpr<F>::Kind::slice;
  f->label = std::move(label);
  f->pres = std::move(pres);
  f->field = field;
  f->dvec = std::move(d);
  f->zeroed = std::move(zeroed_arrows);
  return f;
}

template <class F>
FamilyPtr<F> make_sum(std::string label, std::vector<FamilyPtr<F>> children) {
  if (children.empty()) throw domain_error("sum family: no children");
  auto f = std::make_shared<FamilyExpr<F>>();
  f->kind = FamilyExpr<F>::Kind::sum;
  f->label = std::move(label);
  f->pres = children[0]->pres;
  f->field = children[0]->field;
  f->dvec.d.assign(static_cast<std::size_t>(f->pres->quiver.num_vertices()), 0);
  for (const auto& c : children) {
    if (c->pres->label != f->pres->label)
      throw domain_error("sum family: children over different presentations");
    for (int v = 0; v < f->pres->quiver.num_vertices(); ++v)
      f->dvec.d[static_cast<std::size_t>(v)] += c->dvec.d[static_cast<std::size_t>(v)];
  }
  f->children = std::move(children);
  return f;
}

template <class F>
FamilyPtr<F> make_extfam(std::string label, FamilyPtr<F> quotient, FamilyPtr<F> sub) {
  if (quotient->pres->label != sub->pres->label)
    throw domain_error("extfam family: children over different presentations");
  auto f = std::make_shared<FamilyExpr<F>>();
  f->kind = FamilyExpr<F>::Kind::extfam;
  f->label = std::move(label);
  f->pres = quotient->pres;
  f->field = quotient->field;
  f->dvec.d.assign(static_cast<std::size_t>(f->pres->quiver.num_vertices()), 0);
  for (int v = 0; v < f->pres->quiver.num_vertices(); ++v)
    f->dvec.d[static_cast<std::size_t>(v)] =
        quotient->dvec.d[static_cast<std::size_t>(v)] + sub->dvec.d[static_cast<std::size_t>(v)];
  f->children = {std::move(quotient), std::move(sub)};
  return f;
}

// ---- sampling -----------------------------------------------------------

namespace detail {

template <class F>
Mat<F> random_invertible(const F& k, int n, Rng& rng) {
  while (true) {
    Mat<F> g = random_matrix(k, n, n, rng);
    if (rank(k, g) == n) return g;
  }
}

}  // namespace detail

// One random member of the family. Orbit members are conjugated by a
// random graded base change; free coordinates are sampled uniformly;
// extensions take a uniformly random element of the arrow-block
// derivation solution space. Samples are always valid module points.
template <class F>
ModulePoint<F> sample(const FamilyExpr<F>& f, Rng& rng) {
  const F& k = f.field;
  const Quiver& q = f.pres->quiver;
  switch (f.kind) {
    case FamilyExpr<F>::Kind::orbit: {
      const ModulePoint<F>& m = *f.point;
      std::vector<Mat<F>> g, ginv;
      for (int v = 0; v < q.num_vertices(); ++v) {
        g.push_back(detail::random_invertible(k, m.dim_at(v), rng));
        ginv.push_back(*mat_inverse(k, g.back()));
      }
      std::vector<Mat<F>> arrows;
      for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        arrows.push_back(mat_mul(k, ginv[static_cast<std::size_t>(ar.source)],
                                 mat_mul(k, m.arrow[static_cast<std::size_t>(a)],
                                         g[static_cast<std::size_t>(ar.target)])));
      }
      return make_point(f.pres, k, m.dvec, std::move(arrows));
    }
    case FamilyExpr<F>::Kind::repspace:
    case FamilyExpr<F>::Kind::slice: {
      std::vector<bool> zero(static_cast<std::size_t>(q.num_arrows()), false);
      for (int a : f.zeroed) zero[static_cast<std::size_t>(a)] = true;
      std::vector<Mat<F>> arrows;
      for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        int r = f.dvec.d[static_cast<std::size_t>(ar.source)];
        int c = f.dvec.d[static_cast<std::size_t>(ar.target)];
        arrows.push_back(zero[static_cast<std::size_t>(a)] ? zero_mat(k, r, c)
                                                           : random_matrix(k, r, c, rng));
      }
      return make_point(f.pres, k, f.dvec, std::move(arrows));
    }
    case FamilyExpr<F>::Kind::sum: {
      Rng base(rng.next());  // advance so successive samples differ
      std::vector<ModulePoint<F>> parts;
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        Rng sub = base.split(i);
        parts.push_back(sample(*f.children[i], sub));
      }
      return direct_sum(parts);
    }
    case FamilyExpr<F>::Kind::extfam: {
      Rng base(rng.next());
      Rng r1 = base.split(1), r2 = base.split(2), r3 = base.split(3);
      ModulePoint<F> quot = sample(*f.children[0], r1);
      ModulePoint<F> sub = sample(*f.children[1], r2);
      auto dval = sample_arrow_derivation(quot, sub, r3);
      return extension_from_derivation(quot, sub, dval);
    }
  }
  throw internal_error("sample: unknown family kind");
}

// ---- generic values -------------------------------------------------------

// Minimum of per-trial values over independent sample pairs. Upper
// semicontinuity makes the minimum the generic value with high
// probability; the reported value is always >= the true generic value.
struct GenericStats {
  int value = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<int> per_trial;
};

template <class F>
GenericStats generic_pair_stat(const FamilyExpr<F>& f1, const FamilyExpr<F>& f2, int trials,
                               Rng& rng,
                               const std::function<int(const ModulePoint<F>&,
                                                       const ModulePoint<F>&)>& dim_fn) {
  if (f1.pres->label != f2.pres->label)
    throw domain_error("generic value: families over different presentations");
  if (trials < 1) throw domain_error("generic value: trials must be positive");
  GenericStats st;
  st.trials = trials;
  st.seed = rng.next();
  Rng base(st.seed);
  for (int t = 0; t < trials; ++t) {
    Rng tr = base.split(static_cast<std::uint64_t>(t));
    Rng ra = tr.split(0), rb = tr.split(1);
    ModulePoint<F> a = sample(f1, ra);
    ModulePoint<F> b = sample(f2, rb);
    st.per_trial.push_back(dim_fn(a, b));
  }
  st.value = st.per_trial[0];
  for (int v : st.per_trial) st.value = std::min(st.value, v);
  return st;
}

template <class F>
GenericStats generic_hom(const FamilyExpr<F>& f1, const FamilyExpr<F>& f2,
                         int trials, Rng& rng) {
  return generic_pair_stat<F>(f1, f2, trials, rng,
                              [](const ModulePoint<F>& a, const ModulePoint<F>& b) {
                                return hom_dim(a, b);
                              });
}

template <class F>
GenericStats generic_ext(const FamilyExpr<F>& f1, const FamilyExpr<F>& f2,
                         int trials, Rng& rng) {
  return generic_pair_stat<F>(f1, f2, trials, rng,
                              [](const ModulePoint<F>& a, const ModulePoint<F>& b) {
                                return ext1_dim(a, b);
                              });
}

// ---- the direct-sum component criterion -----------------------------------

// The closure of the direct sum of components is a component exactly
// when all pairwise generic extension spaces vanish. The caller asserts
// that each part presents an irreducible component; this is recorded,
// not verified.
template <class F>
struct SumComponentReport {
  bool is_component = false;
  // ext_matrix[i][j] for i != j is the generic ext of (parts[i], parts[j])
  std::vector<std::vector<GenericStats>> ext_matrix;
};

template <class F>
SumComponentReport<F> sum_is_component(const std::vector<FamilyPtr<F>>& parts, int trials,
                                       Rng& rng) {
  if (parts.empty()) throw domain_error("sum_is_component: no parts");
  const std::uint64_t run = rng.next();
  SumComponentReport<F> rep;
  rep.is_component = true;
  const int t = static_cast<int>(parts.size());
  rep.ext_matrix.assign(static_cast<std::size_t>(t),
                        std::vector<GenericStats>(static_cast<std::size_t>(t)));
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) {
      if (i == j) continue;
      Rng pair_rng = Rng(run).split(static_cast<std::uint64_t>(i) * 1000003ULL +
                                    static_cast<std::uint64_t>(j));
      GenericStats st = generic_ext(*parts[static_cast<std::size_t>(i)],
                                    *parts[static_cast<std::size_t>(j)], trials, pair_rng);
      if (st.value != 0) rep.is_component = false;
      rep.ext_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(st);
    }
  return rep;
}

// ---- family dimensions -----------------------------------------------------

struct FamilyDim {
  long long graded = 0;
  long long saturated = 0;
};

namespace detail {

template <class F>
struct SampleWithTangent {
  ModulePoint<F> pt;
  // each direction: one matrix per arrow, the first-order motion
  std::vector<std::vector<Mat<F>>> directions;
};

// Directions along the graded base-change action at pt, one per unit of
// the product of matrix algebras, computed with first-order jets.
template <class F>
void append_commutator_directions(const ModulePoint<F>& pt,
                                  std::vector<std::vector<Mat<F>>>& out) {
  const F& k = pt.field;
  const Quiver& q = pt.pres->quiver;
  DualNumbers<F> jets{k};
  for (int v = 0; v < q.num_vertices(); ++v)
    for (int i = 0; i < pt.dim_at(v); ++i)
      for (int j = 0; j < pt.dim_at(v); ++j) {
        std::vector<Mat<F>> dir;
        for (int a = 0; a < q.num_arrows(); ++a) {
          const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
          const Mat<F>& x = pt.arrow[static_cast<std::size_t>(a)];
          // (1 - eps xi)_s X (1 + eps xi)_t with xi the (v,i,j) unit
          Mat<F> xi_s = zero_mat(k, pt.dim_at(ar.source), pt.dim_at(ar.source));
          Mat<F> xi_t = zero_mat(k, pt.dim_at(ar.target), pt.dim_at(ar.target));
          if (ar.source == v) xi_s.at(i, j) = k.one();
          if (ar.target == v) xi_t.at(i, j) = k.one();
          auto left = dual_lift(k, identity_mat(k, pt.dim_at(ar.source)), mat_neg(k, xi_s));
          auto mid = dual_lift(k, x, zero_mat(k, x.rows, x.cols));
          auto right = dual_lift(k, identity_mat(k, pt.dim_at(ar.target)), xi_t);
          auto prod = mat_mul(jets, mat_mul(jets, left, mid), right);
          dir.push_back(dual_derivative(k, prod));
        }
        bool nonzero = false;
        for (const auto& m : dir) nonzero = nonzero || !mat_is_zero(k, m);
        if (nonzero) out.push_back(std::move(dir));
      }
}

template <class F>
SampleWithTangent<F> sample_with_tangent(const FamilyExpr<F>& f, Rng& rng);

// Middle-term tangent data for an extension family: the derivation
// coordinates are pinned to the pivot columns of the arrow-block system
// at the sampled pair, so child motions extend uniquely to first order.
template <class F>
SampleWithTangent<F> extfam_with_tangent(const FamilyExpr<F>& f, Rng& rng) {
  const F& k = f.field;
  const Quiver& q = f.pres->quiver;
  Rng outer(rng.next());  // advance so successive samples differ
  for (int attempt = 0; attempt < 16; ++attempt) {
    const std::uint64_t base = 4ULL * static_cast<std::uint64_t>(attempt);
    Rng r1 = outer.split(base + 1), r2 = outer.split(base + 2), r3 = outer.split(base + 3);
    SampleWithTangent<F> c1 = sample_with_tangent(*f.children[0], r1);
    SampleWithTangent<F> c2 = sample_with_tangent(*f.children[1], r2);
    const ModulePoint<F>& m1 = c1.pt;
    const ModulePoint<F>& m2 = c2.pt;
    auto abs = der_arrow_system(m1, m2);
    Echelon<F> ech = echelonize(k, abs.sys);
    auto kb = kernel_basis(k, abs.sys);
    // sampled derivation coordinates
    Mat<F> g0 = zero_mat(k, abs.sys.cols, 1);
    for (const Mat<F>& v : kb) {
      auto c = k.sample(r3);
      for (int i = 0; i < g0.rows; ++i) g0.at(i, 0) = k.add(g0.at(i, 0), k.mul(c, v.at(i, 0)));
    }
    auto blocks_from_vec = [&](const Mat<F>& vec) {
      std::vector<Mat<F>> blocks;
      for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        Mat<F> b = zero_mat(k, m1.dim_at(ar.source), m2.dim_at(ar.target));
        for (int i = 0; i < b.rows; ++i)
          for (int j = 0; j < b.cols; ++j)
            b.at(i, j) = vec.at(abs.col_off[static_cast<std::size_t>(a)] + i * b.cols + j, 0);
        blocks.push_back(std::move(b));
      }
      return blocks;
    };
    auto middle_arrows = [&](const std::vector<Mat<F>>& a1, const std::vector<Mat<F>>& delta,
                             const std::vector<Mat<F>>& a2) {
      std::vector<Mat<F>> arrows;
      for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        Mat<F> x = zero_mat(k, f.dvec.d[static_cast<std::size_t>(ar.source)],
                            f.dvec.d[static_cast<std::size_t>(ar.target)]);
        set_block(x, 0, 0, a1[static_cast<std::size_t>(a)]);
        set_block(x, 0, m1.dim_at(ar.target), delta[static_cast<std::size_t>(a)]);
        set_block(x, m1.dim_at(ar.source), m1.dim_at(ar.target), a2[static_cast<std::size_t>(a)]);
        arrows.push_back(std::move(x));
      }
      return arrows;
    };
    SampleWithTangent<F> out;
    out.pt = make_point(f.pres, k, f.dvec, middle_arrows(m1.arrow, blocks_from_vec(g0), m2.arrow));
    auto zero_blocks1 = [&]() {
      std::vector<Mat<F>> z;
      for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        z.push_back(zero_mat(k, m1.dim_at(ar.source), m1.dim_at(ar.target)));
      }
      return z;
    };
    auto zero_blocks2 = [&]() {
      std::vector<Mat<F>> z;
      for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        z.push_back(zero_mat(k, m2.dim_at(ar.source), m2.dim_at(ar.target)));
      }
      return z;
    };
    // pure derivation motions: the kernel of the system at the sample
    for (const Mat<F>& v : kb)
      out.directions.push_back(middle_arrows(zero_blocks1(), blocks_from_vec(v), zero_blocks2()));
    // child motions with the implicit first-order correction of the
    // derivation block (free coordinates held fixed)
    Mat<F> pivot_cols = zero_mat(k, abs.sys.rows, ech.rank);
    for (int c = 0; c < ech.rank; ++c)
      for (int r = 0; r < abs.sys.rows; ++r)
        pivot_cols.at(r, c) = abs.sys.at(r, ech.pivot_cols[static_cast<std::size_t>(c)]);
    DualNumbers<F> jets{k};
    bool degenerate = false;
    auto push_child_dirs = [&](const SampleWithTangent<F>& child, bool first) {
      for (const auto& delta : child.directions) {
        if (degenerate) return;
        std::vector<Mat<DualNumbers<F>>> d1arr, d2arr;
        for (int a = 0; a < q.num_arrows(); ++a) {
          const Mat<F>& x1 = m1.arrow[static_cast<std::size_t>(a)];
          const Mat<F>& x2 = m2.arrow[static_cast<std::size_t>(a)];
          Mat<F> z1 = zero_mat(k, x1.rows, x1.cols);
          Mat<F> z2 = zero_mat(k, x2.rows, x2.cols);
          d1arr.push_back(dual_lift(k, x1, first ? delta[static_cast<std::size_t>(a)] : z1));
          d2arr.push_back(dual_lift(k, x2, first ? z2 : delta[static_cast<std::size_t>(a)]));
        }
        ModulePoint<DualNumbers<F>> m1d{f.pres, jets, m1.dvec, std::move(d1arr)};
        ModulePoint<DualNumbers<F>> m2d{f.pres, jets, m2.dvec, std::move(d2arr)};
        auto abs_d = der_arrow_system(m1d, m2d);
        // first-order part of (A0 + eps A1)(g0 + eps dg) = 0 with free
        // coordinates of dg frozen: A0|pivots dg = -A1 g0
        Mat<F> rhs = zero_mat(k, abs.sys.rows, 1);
        for (int r = 0; r < abs.sys.rows; ++r) {
          auto acc = k.zero();
          for (int c = 0; c < abs.sys.cols; ++c)
            acc = k.add(acc, k.mul(abs_d.sys.at(r, c).der, g0.at(c, 0)));
          rhs.at(r, 0) = k.neg(acc);
        }
        auto z = solve_linear(k, pivot_cols, rhs);
        if (!z) {
          degenerate = true;  // non-generic sample; retry
          return;
        }
        Mat<F> dg = zero_mat(k, abs.sys.cols, 1);
        for (int c = 0; c < ech.rank; ++c)
          dg.at(ech.pivot_cols[static_cast<std::size_t>(c)], 0) = z->at(c, 0);
        if (first)
          out.directions.push_back(middle_arrows(delta, blocks_from_vec(dg), zero_blocks2()));
        else
          out.directions.push_back(middle_arrows(zero_blocks1(), blocks_from_vec(dg), delta));
      }
    };
    push_child_dirs(c1, true);
    push_child_dirs(c2, false);
    if (degenerate) continue;
    append_commutator_directions(out.pt, out.directions);
    return out;
  }
  throw internal_error("extfam tangent: no generic sample found (pivot completion kept failing)");
}

template <class F>
SampleWithTangent<F> sample_with_tangent(const FamilyExpr<F>& f, Rng& rng) {
  const F& k = f.field;
  const Quiver& q = f.pres->quiver;
  SampleWithTangent<F> out;
  switch (f.kind) {
    case FamilyExpr<F>::Kind::orbit: {
      out.pt = sample(f, rng);
      append_commutator_directions(out.pt, out.directions);
      return out;
    }
    case FamilyExpr<F>::Kind::repspace:
    case FamilyExpr<F>::Kind::slice: {
      out.pt = sample(f, rng);
      std::vector<bool> zero(static_cast<std::size_t>(q.num_arrows()), false);
      for (int a : f.zeroed) zero[static_cast<std::size_t>(a)] = true;
      for (int a = 0; a < q.num_arrows(); ++a) {
        if (zero[static_cast<std::size_t>(a)]) continue;
        const Mat<F>& x = out.pt.arrow[static_cast<std::size_t>(a)];
        for (int i = 0; i < x.rows; ++i)
          for (int j = 0; j < x.cols; ++j) {
            std::vector<Mat<F>> dir;
            for (int b = 0; b < q.num_arrows(); ++b) {
              const Mat<F>& xb = out.pt.arrow[static_cast<std::size_t>(b)];
              Mat<F> d = zero_mat(k, xb.rows, xb.cols);
              if (b == a) d.at(i, j) = k.one();
              dir.push_back(std::move(d));
            }
            out.directions.push_back(std::move(dir));
          }
      }
      return out;
    }
    case FamilyExpr<F>::Kind::sum: {
      Rng base(rng.next());
      std::vector<SampleWithTangent<F>> kids;
      std::vector<ModulePoint<F>> pts;
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        Rng sub = base.split(i);
        kids.push_back(sample_with_tangent(*f.children[i], sub));
        pts.push_back(kids.back().pt);
      }
      out.pt = direct_sum(pts);
      // embed child motions block-diagonally
      for (std::size_t ci = 0; ci < kids.size(); ++ci) {
        for (const auto& delta : kids[ci].directions) {
          std::vector<Mat<F>> dir;
          for (int a = 0; a < q.num_arrows(); ++a) {
            const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
            Mat<F> d = zero_mat(k, out.pt.arrow[static_cast<std::size_t>(a)].rows,
                                out.pt.arrow[static_cast<std::size_t>(a)].cols);
            int ro = 0, co = 0;
            for (std::size_t cj = 0; cj < ci; ++cj) {
              ro += pts[cj].dim_at(ar.source);
              co += pts[cj].dim_at(ar.target);
            }
            set_block(d, ro, co, delta[static_cast<std::size_t>(a)]);
            dir.push_back(std::move(d));
          }
          out.directions.push_back(std::move(dir));
        }
      }
      append_commutator_directions(out.pt, out.directions);
      return out;
    }
    case FamilyExpr<F>::Kind::extfam:
      return extfam_with_tangent(f, rng);
  }
  throw internal_error("sample_with_tangent: unknown family kind");
}

template <class F>
long long tangent_rank(const FamilyExpr<F>& f, Rng& rng) {
  SampleWithTangent<F> s = sample_with_tangent(f, rng);
  int width = 0;
  for (const Mat<F>& x : s.pt.arrow) width += x.rows * x.cols;
  Mat<F> stacked = zero_mat(f.field, static_cast<int>(s.directions.size()), width);
  for (std::size_t i = 0; i < s.directions.size(); ++i) {
    int col = 0;
    for (const Mat<F>& d : s.directions[i])
      for (const auto& e : d.a) stacked.at(static_cast<int>(i), col++) = e;
  }
  return rank(f.field, stacked);
}

}  // namespace detail

inline long long saturation_shift(const DimVec& d) {
  long long total = d.total();
  long long shift = total * total;
  for (int x : d.d) shift -= static_cast<long long>(x) * x;
  return shift;
}

// Dimension of the family, graded (inside the product of arrow spaces,
// saturated under the graded base-change group) and in the ungraded
// module variety (adds d^2 - sum d_v^2). Orbits use the closed form
// via the endomorphism algebra; linear families count free coordinates;
// sums and extension families take the rank of the parametrization's
// differential at a random member.
template <class F>
FamilyDim family_dim(const FamilyExpr<F>& f, Rng& rng) {
  FamilyDim out;
  switch (f.kind) {
    case FamilyExpr<F>::Kind::orbit: {
      long long group = 0;
      for (int x : f.dvec.d) group += static_cast<long long>(x) * x;
      out.graded = group - end_dim(*f.point);
      break;
    }
    case FamilyExpr<F>::Kind::repspace:
    case FamilyExpr<F>::Kind::slice: {
      const Quiver& q = f.pres->quiver;
      std::vector<bool> zero(static_cast<std::size_t>(q.num_arrows()), false);
      for (int a : f.zeroed) zero[static_cast<std::size_t>(a)] = true;
      long long free_coords = 0;
      for (int a = 0; a < q.num_arrows(); ++a) {
        if (zero[static_cast<std::size_t>(a)]) continue;
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        free_coords += static_cast<long long>(f.dvec.d[static_cast<std::size_t>(ar.source)]) *
                       f.dvec.d[static_cast<std::size_t>(ar.target)];
      }
      out.graded = free_coords;
      break;
    }
    case FamilyExpr<F>::Kind::sum:
    case FamilyExpr<F>::Kind::extfam:
      out.graded = detail::tangent_rank(f, rng);
      break;
  }
  out.saturated = out.graded + saturation_shift(f.dvec);
  return out;
}

// Same quantity computed through the differential for every family kind;
// the cross-check route for the closed forms above.
template <class F>
FamilyDim family_dim_jacobian(const FamilyExpr<F>& f, Rng& rng) {
  FamilyDim out;
  out.graded = detail::tangent_rank(f, rng);
  out.saturated = out.graded + saturation_shift(f.dvec);
  return out;
}

// Dimension of the closure of the direct sum of the parts, by the
// additivity formula: sum of part dimensions plus the cross terms
// d_i d_j - hom(C_i, C_j); everything in the saturated convention.
template <class F>
long long sum_dim(const std::vector<FamilyPtr<F>>& parts, int trials, Rng& rng) {
  if (parts.empty()) throw domain_error("sum_dim: no parts");
  const std::uint64_t run = rng.next();
  long long total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    Rng sub = Rng(run).split(i);
    total += family_dim(*parts[i], sub).saturated;
  }
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (i == j) continue;
      Rng pair_rng = Rng(run).split(1000003ULL * (i + 1) + j);
      GenericStats st = generic_hom(*parts[i], *parts[j], trials, pair_rng);
      total += static_cast<long long>(parts[i]->dvec.total()) * parts[j]->dvec.total() - st.value;
    }
  return total;
}

// ---- canonical decomposition ------------------------------------------------

template <class F>
struct CanonicalClass {
  DimVec dvec;
  int multiplicity = 0;
  ModulePoint<F> witness;
  bool certified = false;
};

template <class F>
struct CanonicalDecomposition {
  std::vector<CanonicalClass<F>> classes;
  bool stable = false;   // two independent samples agreed
  int samples_used = 0;
};

namespace detail {

template <class F>
std::multiset<std::pair<std::vector<int>, int>> class_signature(
    const DecompositionResult<F>& d) {
  std::multiset<std::pair<std::vector<int>, int>> sig;
  for (const auto& c : d.classes) sig.insert({c.rep.dvec.d, c.multiplicity});
  return sig;
}

}  // namespace detail

// Decomposition of the generic member: sample, decompose, and require a
// second independent sample to reproduce the dimension-vector multiset.
// Disagreement triggers more samples; persistent disagreement is
// reported as unstable rather than silently resolved.
template <class F>
CanonicalDecomposition<F> canonical_decomposition(const FamilyExpr<F>& f, Rng& rng,
                                                  int max_samples = 6) {
  CanonicalDecomposition<F> out;
  Rng s0 = rng.split(0);
  ModulePoint<F> first = sample(f, s0);
  Rng d0 = rng.split(1000);
  DecompositionResult<F> dec = decompose(first, d0);
  auto sig = detail::class_signature(dec);
  out.samples_used = 1;
  for (int s = 1; s < max_samples; ++s) {
    Rng ss = rng.split(static_cast<std::uint64_t>(s));
    ModulePoint<F> pt = sample(f, ss);
    Rng ds = rng.split(1000 + static_cast<std::uint64_t>(s));
    DecompositionResult<F> d2 = decompose(pt, ds);
    ++out.samples_used;
    if (detail::class_signature(d2) == sig) {
      out.stable = true;
      break;
    }
    // keep the finer decomposition; a sample further from the closed
    // degenerate strata splits more
    if (d2.summands.size() > dec.summands.size()) {
      dec = std::move(d2);
      sig = detail::class_signature(dec);
    }
  }
  for (const auto& c : dec.classes)
    out.classes.push_back({c.rep.dvec, c.multiplicity, c.rep, c.certified});
  return out;
}

// ---- component graph ---------------------------------------------------------

// Vertices are the given families; an arrow i -> j records that the
// generic extension space of (parts[j], parts[i]) vanished; edges need
// both directions. The caller asserts the parts present components with
// generically indecomposable members.
template <class F>
ComponentGraph component_graph(const std::vector<FamilyPtr<F>>& parts, int trials, Rng& rng) {
  const std::uint64_t run = rng.next();
  ComponentGraph g;
  for (const auto& p : parts) g.labels.push_back(p->label);
  const int t = static_cast<int>(parts.size());
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) {
      if (i == j) continue;
      Rng pair_rng = Rng(run).split(static_cast<std::uint64_t>(i) * 1000003ULL +
                                    static_cast<std::uint64_t>(j));
      GenericStats st = generic_ext(*parts[static_cast<std::size_t>(j)],
                                    *parts[static_cast<std::size_t>(i)], trials, pair_rng);
      if (st.value == 0) g.arrows.push_back({i, j});
    }
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j)
      if (g.has_arrow(i, j) && g.has_arrow(j, i)) g.edges.push_back({i, j});
  return g;
}

}  // namespace modvar
