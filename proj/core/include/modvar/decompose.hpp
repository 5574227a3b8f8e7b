#pragma once

#include <optional>
#include <variant>

#include "modvar/hom_der.hpp"
#include "modvar/module_point.hpp"

namespace modvar {

inline constexpr int kIsoTrials = 8;
inline constexpr int kSplitTrials = 8;

namespace detail {

// ---- univariate polynomials over the field, little-endian -------------

template <class F>
using FPoly = std::vector<typename F::Elt>;

template <class F>
void poly_trim(const F& k, FPoly<F>& p) {
  while (!p.empty() && k.is_zero(p.back())) p.pop_back();
}

template <class F>
int poly_deg(const FPoly<F>& p) {
  return static_cast<int>(p.size()) - 1;  // -1 for the zero polynomial
}

template <class F>
FPoly<F> poly_mul(const F& k, const FPoly<F>& a, const FPoly<F>& b) {
  if (a.empty() || b.empty()) return {};
  FPoly<F> r(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
  return r;
}

// Remainder of a modulo b (b nonzero).
template <class F>
FPoly<F> poly_mod(const F& k, FPoly<F> a, const FPoly<F>& b) {
  poly_trim(k, a);
  const auto lead_inv = k.inv(b.back());
  while (poly_deg<F>(a) >= poly_deg<F>(b)) {
    const auto c = k.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = k.sub(a[shift + i], k.mul(c, b[i]));
    poly_trim(k, a);
  }
  return a;
}

template <class F>
FPoly<F> poly_monic(const F& k, FPoly<F> p) {
  poly_trim(k, p);
  if (p.empty()) return p;
  const auto inv = k.inv(p.back());
  for (auto& c : p) c = k.mul(c, inv);
  return p;
}

template <class F>
FPoly<F> poly_gcd(const F& k, FPoly<F> a, FPoly<F> b) {
  poly_trim(k, a);
  poly_trim(k, b);
  while (!b.empty()) {
    FPoly<F> r = poly_mod(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(k, std::move(a));
}

// base^e modulo m.
template <class F>
FPoly<F> poly_powmod(const F& k, FPoly<F> base, std::uint64_t e, const FPoly<F>& m) {
  FPoly<F> r{k.one()};
  base = poly_mod(k, std::move(base), m);
  while (e > 0) {
    if (e & 1ULL) r = poly_mod(k, poly_mul(k, r, base), m);
    e >>= 1ULL;
    if (e) base = poly_mod(k, poly_mul(k, base, base), m);
  }
  return r;
}

template <class F>
typename F::Elt poly_eval(const F& k, const FPoly<F>& p, const typename F::Elt& x) {
  auto acc = k.zero();
  for (std::size_t i = p.size(); i-- > 0;) acc = k.add(k.mul(acc, x), p[i]);
  return acc;
}

// Minimal polynomial of a square matrix acting on row vectors, by Krylov
// iteration from every unit vector (lcm of the per-vector annihilators).
template <class F>
FPoly<F> min_poly(const F& k, const Mat<F>& t) {
  const int d = t.rows;
  FPoly<F> mu{k.one()};
  for (int start = 0; start < d && poly_deg<F>(mu) < d; ++start) {
    // rows: w, wT, wT^2, ...
    Mat<F> w = zero_mat(k, 1, d);
    w.at(0, start) = k.one();
    std::vector<Mat<F>> krylov{w};
    FPoly<F> ann;
    while (true) {
      Mat<F> stacked = zero_mat(k, static_cast<int>(krylov.size()) - 1, d);
      for (std::size_t i = 0; i + 1 < krylov.size(); ++i)
        for (int j = 0; j < d; ++j) stacked.at(static_cast<int>(i), j) = krylov[i].at(0, j);
      Mat<F> target = mat_transpose(k, krylov.back());
      auto dep = solve_linear(k, mat_transpose(k, stacked), target);
      if (dep) {
        ann.assign(krylov.size(), k.zero());
        for (std::size_t i = 0; i + 1 < krylov.size(); ++i) ann[i] = k.neg(dep->at(static_cast<int>(i), 0));
        ann.back() = k.one();
        break;
      }
      krylov.push_back(mat_mul(k, krylov.back(), t));
    }
    // mu = lcm(mu, ann)
    FPoly<F> g = poly_gcd(k, mu, ann);
    FPoly<F> prod = poly_mul(k, mu, ann);
    // divide prod by g exactly
    FPoly<F> q;
    {
      FPoly<F> rem = prod;
      poly_trim(k, rem);
      q.assign(rem.size() >= g.size() ? rem.size() - g.size() + 1 : 0, k.zero());
      const auto lead_inv = k.inv(g.back());
      while (poly_deg<F>(rem) >= poly_deg<F>(g)) {
        const auto c = k.mul(rem.back(), lead_inv);
        const std::size_t shift = rem.size() - g.size();
        q[shift] = c;
        for (std::size_t i = 0; i < g.size(); ++i)
          rem[shift + i] = k.sub(rem[shift + i], k.mul(c, g[i]));
        poly_trim(k, rem);
      }
    }
    mu = poly_monic(k, std::move(q));
  }
  return mu;
}

// Roots in F_p of a polynomial: trial evaluation for tiny p, otherwise
// split off the product of distinct linear factors with x^p - x and
// isolate roots by the standard random half-power splitting.
inline std::vector<std::uint64_t> roots_in_prime_field(const PrimeField& k,
                                                       FPoly<PrimeField> p, Rng& rng) {
  poly_trim(k, p);
  std::vector<std::uint64_t> roots;
  if (poly_deg<PrimeField>(p) <= 0) return roots;
  if (k.p <= 257) {
    for (std::uint64_t x = 0; x < k.p; ++x)
      if (k.is_zero(poly_eval(k, p, x))) roots.push_back(x);
    return roots;
  }
  FPoly<PrimeField> xp = poly_powmod(k, FPoly<PrimeField>{k.zero(), k.one()}, k.p, p);
  if (xp.size() < 2) xp.resize(2, k.zero());
  xp[1] = k.sub(xp[1], k.one());  // x^p - x
  FPoly<PrimeField> lin = poly_gcd(k, p, xp);
  // recursively split `lin` into linear factors
  std::vector<FPoly<PrimeField>> work{lin};
  while (!work.empty()) {
    FPoly<PrimeField> g = poly_monic(k, work.back());
    work.pop_back();
    int deg = poly_deg<PrimeField>(g);
    if (deg <= 0) continue;
    if (deg == 1) {
      roots.push_back(k.neg(g[0]));
      continue;
    }
    // gcd((x+c)^((p-1)/2) - 1, g) splits g for a random shift c
    for (int attempt = 0; attempt < 64; ++attempt) {
      FPoly<PrimeField> shifted{k.sample(rng), k.one()};
      FPoly<PrimeField> w = poly_powmod(k, shifted, (k.p - 1) / 2, g);
      if (w.empty()) w.push_back(k.zero());
      w[0] = k.sub(w[0], k.one());
      FPoly<PrimeField> h = poly_gcd(k, g, w);
      int hd = poly_deg<PrimeField>(h);
      if (hd > 0 && hd < deg) {
        // g / h
        FPoly<PrimeField> q;
        FPoly<PrimeField> rem = g;
        q.assign(rem.size() - h.size() + 1, k.zero());
        const auto li = k.inv(h.back());
        while (poly_deg<PrimeField>(rem) >= poly_deg<PrimeField>(h)) {
          const auto c = k.mul(rem.back(), li);
          const std::size_t shift = rem.size() - h.size();
          q[shift] = c;
          for (std::size_t i = 0; i < h.size(); ++i)
            rem[shift + i] = k.sub(rem[shift + i], k.mul(c, h[i]));
          poly_trim(k, rem);
        }
        work.push_back(h);
        work.push_back(q);
        break;
      }
    }
  }
  return roots;
}

}  // namespace detail

// ---- Fitting decomposition -------------------------------------------

// Outcome of splitting along one endomorphism: either the module is left
// whole (f nilpotent or invertible) or it splits as kernel plus image of
// f^D, both arrow-stable, with row bases of the two subspaces.
template <class F>
struct FittingSplit {
  ModulePoint<F> part1;  // generalized kernel of f^D
  ModulePoint<F> part2;  // image of f^D
  std::vector<Mat<F>> basis1;  // per vertex, rows spanning part1 inside M
  std::vector<Mat<F>> basis2;
};

// Restricts the module structure to an arrow-stable subspace given by
// per-vertex full-row-rank bases.
template <class F>
ModulePoint<F> restrict_to_subspace(const ModulePoint<F>& m, const std::vector<Mat<F>>& basis) {
  const F& k = m.field;
  const Quiver& q = m.pres->quiver;
  DimVec d;
  for (const Mat<F>& b : basis) d.d.push_back(b.rows);
  std::vector<Mat<F>> arrows;
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
    const Mat<F>& bs = basis[static_cast<std::size_t>(ar.source)];
    const Mat<F>& bt = basis[static_cast<std::size_t>(ar.target)];
    // solve Y * bt = bs * X  (the subspace is arrow-stable, so this is consistent)
    Mat<F> rhs = mat_transpose(k, mat_mul(k, bs, m.arrow[static_cast<std::size_t>(a)]));
    auto yt = solve_linear(k, mat_transpose(k, bt), rhs);
    if (!yt) throw internal_error("restrict_to_subspace: subspace is not arrow-stable");
    arrows.push_back(mat_transpose(k, *yt));
  }
  return make_point(m.pres, k, std::move(d), std::move(arrows));
}

// Fitting decomposition along an endomorphism (vertex-indexed tuple):
// M = ker(f^D) + im(f^D) with D the total dimension. Returns nullopt
// (whole) when f^D is zero or invertible.
template <class F>
std::optional<FittingSplit<F>> fitting_split(const ModulePoint<F>& m,
                                             const std::vector<Mat<F>>& f) {
  const F& k = m.field;
  const Quiver& q = m.pres->quiver;
  const unsigned dtot = static_cast<unsigned>(m.total_dim());
  std::vector<Mat<F>> ker, img;
  int kdim = 0;
  for (int v = 0; v < q.num_vertices(); ++v) {
    Mat<F> power = mat_pow(k, f[static_cast<std::size_t>(v)], dtot);
    ker.push_back(left_kernel_basis(k, power));
    img.push_back(row_space_basis(k, power));
    kdim += ker.back().rows;
  }
  if (kdim == 0 || kdim == m.total_dim()) return std::nullopt;
  FittingSplit<F> s{restrict_to_subspace(m, ker), restrict_to_subspace(m, img), std::move(ker),
                    std::move(img)};
  return s;
}

// ---- randomized isomorphism test ---------------------------------------

template <class F>
struct IsoResult {
  bool isomorphic = false;
  // per-vertex invertible intertwiner M -> N when isomorphic
  std::optional<std::vector<Mat<F>>> witness;
  int trials_used = 0;
};

// True results carry an exactly verified invertible intertwiner; false
// results after R random trials are correct up to the (small) chance
// that every sampled hom happened to be singular.
template <class F>
IsoResult<F> is_isomorphic(const ModulePoint<F>& m, const ModulePoint<F>& n, Rng& rng,
                           int trials = kIsoTrials) {
  IsoResult<F> res;
  require_compatible(m, n);
  if (!(m.dvec == n.dvec)) return res;
  if (m.total_dim() == 0) {
    res.isomorphic = true;
    res.witness = std::vector<Mat<F>>();
    for (int v = 0; v < m.pres->quiver.num_vertices(); ++v)
      res.witness->push_back(zero_mat(m.field, 0, 0));
    return res;
  }
  if (hom_dim(m, n) != hom_dim(n, m) || end_dim(m) != end_dim(n)) return res;
  const F& k = m.field;
  HomBasis<F> basis = hom_basis(m, n);
  if (basis.dim() == 0) return res;
  for (int t = 0; t < trials; ++t) {
    res.trials_used = t + 1;
    std::vector<Mat<F>> theta;
    for (int v = 0; v < m.pres->quiver.num_vertices(); ++v)
      theta.push_back(zero_mat(k, m.dim_at(v), n.dim_at(v)));
    for (const auto& elem : basis.elems) {
      auto c = k.sample(rng);
      for (std::size_t v = 0; v < theta.size(); ++v)
        theta[v] = mat_add(k, theta[v], mat_scale(k, c, elem[v]));
    }
    bool invertible = true;
    for (const Mat<F>& tv : theta)
      if (rank(k, tv) != tv.rows) {
        invertible = false;
        break;
      }
    if (invertible) {
      if (!verify_intertwiner(m, n, theta))
        throw internal_error("is_isomorphic: hom basis element fails the intertwiner check");
      res.isomorphic = true;
      res.witness = std::move(theta);
      return res;
    }
  }
  return res;
}

// ---- full decomposition -------------------------------------------------

template <class F>
struct DecompositionResult {
  struct Class {
    ModulePoint<F> rep;
    int multiplicity = 0;
    bool certified = false;  // End = k; otherwise the randomized test
  };
  std::vector<Class> classes;
  std::vector<ModulePoint<F>> summands;            // leaf order
  std::vector<std::vector<Mat<F>>> embeddings;     // per leaf, per vertex rows into the input
  bool all_certified = false;
};

namespace detail {

template <class F>
std::vector<Mat<F>> random_endo(const F& k, const ModulePoint<F>& m, const HomBasis<F>& end,
                                Rng& rng) {
  std::vector<Mat<F>> f;
  for (int v = 0; v < m.pres->quiver.num_vertices(); ++v)
    f.push_back(zero_mat(k, m.dim_at(v), m.dim_at(v)));
  for (const auto& elem : end.elems) {
    auto c = k.sample(rng);
    for (std::size_t v = 0; v < f.size(); ++v) f[v] = mat_add(k, f[v], mat_scale(k, c, elem[v]));
  }
  return f;
}

template <class F>
void decompose_rec(const ModulePoint<F>& m, const std::vector<Mat<F>>& embedding, Rng& rng,
                   DecompositionResult<F>& out) {
  const F& k = m.field;
  if (m.total_dim() == 0) return;
  HomBasis<F> end = hom_basis(m, m);
  bool split_found = false;
  if (end.dim() > 1) {
    if constexpr (std::is_same_v<F, PrimeField>) {
      for (int trial = 0; trial < kSplitTrials && !split_found; ++trial) {
        std::vector<Mat<F>> f = random_endo(k, m, end, rng);
        // eigenvalues of the total action; each shifts f to a singular,
        // generically non-nilpotent endomorphism
        Mat<F> total = zero_mat(k, m.total_dim(), m.total_dim());
        for (int v = 0; v < m.pres->quiver.num_vertices(); ++v)
          set_block(total, vertex_offset(m.dvec, v), vertex_offset(m.dvec, v),
                    f[static_cast<std::size_t>(v)]);
        FPoly<F> mu = min_poly(k, total);
        for (std::uint64_t lambda : roots_in_prime_field(k, mu, rng)) {
          std::vector<Mat<F>> shifted = f;
          for (std::size_t v = 0; v < shifted.size(); ++v)
            for (int i = 0; i < shifted[v].rows; ++i)
              shifted[v].at(i, i) = k.sub(shifted[v].at(i, i), lambda);
          auto split = fitting_split(m, shifted);
          if (!split) continue;
          // compose embeddings and recurse
          auto compose = [&](const std::vector<Mat<F>>& basis) {
            std::vector<Mat<F>> e;
            for (std::size_t v = 0; v < basis.size(); ++v)
              e.push_back(mat_mul(k, basis[v], embedding[v]));
            return e;
          };
          decompose_rec(split->part1, compose(split->basis1), rng, out);
          decompose_rec(split->part2, compose(split->basis2), rng, out);
          split_found = true;
          break;
        }
      }
    } else {
      throw domain_error("decompose requires a prime field (eigenvalue search)");
    }
  }
  if (!split_found) {
    out.summands.push_back(m);
    out.embeddings.push_back(embedding);
    typename DecompositionResult<F>::Class cls{m, 1, end.dim() == 1};
    // merge into an existing isomorphism class if possible
    for (std::size_t ci = 0; ci < out.classes.size(); ++ci) {
      auto& existing = out.classes[ci];
      if (!(existing.rep.dvec == m.dvec)) continue;
      Rng sub = rng.split(0x15a + ci);
      if (is_isomorphic(existing.rep, m, sub).isomorphic) {
        ++existing.multiplicity;
        existing.certified = existing.certified && cls.certified;
        return;
      }
    }
    out.classes.push_back(std::move(cls));
  }
}

}  // namespace detail

// Krull-Remak-Schmidt style decomposition by repeated Fitting splits
// along random endomorphisms. Indecomposability of each leaf is certain
// when its endomorphism algebra is one-dimensional and randomized
// (kSplitTrials failed attempts) otherwise.
template <class F>
DecompositionResult<F> decompose(const ModulePoint<F>& m, Rng& rng) {
  DecompositionResult<F> out;
  std::vector<Mat<F>> identity_embedding;
  for (int v = 0; v < m.pres->quiver.num_vertices(); ++v)
    identity_embedding.push_back(identity_mat(m.field, m.dim_at(v)));
  detail::decompose_rec(m, identity_embedding, rng, out);
  out.all_certified = true;
  for (const auto& c : out.classes) out.all_certified = out.all_certified && c.certified;
  return out;
}

// Direct sum of the leaves, and the per-vertex change of basis that
// intertwines it with the decomposed module (stacked leaf embeddings).
template <class F>
ModulePoint<F> reassemble(const DecompositionResult<F>& r) {
  if (r.summands.empty()) throw domain_error("reassemble: empty decomposition");
  return direct_sum(r.summands);
}

template <class F>
std::vector<Mat<F>> reassembly_witness(const F& k, const ModulePoint<F>& original,
                                       const DecompositionResult<F>& r) {
  std::vector<Mat<F>> theta;
  for (int v = 0; v < original.pres->quiver.num_vertices(); ++v) {
    Mat<F> stacked = zero_mat(k, original.dim_at(v), original.dim_at(v));
    int row = 0;
    for (const auto& emb : r.embeddings) {
      const Mat<F>& b = emb[static_cast<std::size_t>(v)];
      set_block(stacked, row, 0, b);
      row += b.rows;
    }
    theta.push_back(std::move(stacked));
  }
  return theta;
}

}  // namespace modvar
