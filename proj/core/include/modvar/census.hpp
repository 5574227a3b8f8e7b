#pragma once

#include <map>
#include <numeric>

#include "modvar/hom_der.hpp"
#include "modvar/module_point.hpp"

namespace modvar {

inline constexpr std::uint64_t kCensusBudget = 10'000'000ULL;

// All valid module points at a dimension vector over F_q, in
// lexicographic order of the concatenated arrow entries (first entry
// most significant). Throws when q^(number of entries) exceeds the
// budget.
inline std::vector<ModulePoint<PrimeField>> enumerate_points(
    std::shared_ptr<const AlgebraPresentation> pres, const DimVec& d, const PrimeField& k,
    std::uint64_t budget = kCensusBudget) {
  const Quiver& q = pres->quiver;
  if (d.size() != q.num_vertices())
    throw domain_error("enumerate_points: dimension vector does not match vertex count");
  int entries = 0;
  for (const Arrow& ar : q.arrows)
    entries += d.d[static_cast<std::size_t>(ar.source)] * d.d[static_cast<std::size_t>(ar.target)];
  double space = 1;
  for (int i = 0; i < entries; ++i) {
    space *= static_cast<double>(k.p);
    if (space > static_cast<double>(budget))
      throw domain_error("enumerate_points: search space exceeds budget");
  }
  std::vector<ModulePoint<PrimeField>> found;
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(entries), 0);
  while (true) {
    std::vector<Mat<PrimeField>> arrows;
    int pos = 0;
    for (const Arrow& ar : q.arrows) {
      Mat<PrimeField> x = zero_mat(k, d.d[static_cast<std::size_t>(ar.source)],
                                   d.d[static_cast<std::size_t>(ar.target)]);
      for (auto& e : x.a) e = digits[static_cast<std::size_t>(pos++)];
      arrows.push_back(std::move(x));
    }
    ModulePoint<PrimeField> m = make_point(pres, k, d, std::move(arrows));
    if (is_valid_point(m)) found.push_back(std::move(m));
    // lexicographic odometer, last entry least significant
    int i = entries - 1;
    while (i >= 0 && digits[static_cast<std::size_t>(i)] == k.p - 1) {
      digits[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++digits[static_cast<std::size_t>(i)];
  }
  return found;
}

namespace detail {

// Homogeneous linear conditions over F_q in `digits` unknowns, counted
// by exhaustive enumeration. For q = 2 the walk is a Gray code with the
// condition values packed into machine words, so each step is a couple
// of XORs; otherwise a plain odometer with incremental updates and a
// nonzero-condition counter. Duplicate and identically-zero conditions
// are merged first (they do not change the solution set), and digits
// appearing in no condition contribute a factor of q each without being
// walked.
struct LinearConditionCounter {
  std::uint64_t q = 2;
  int digits = 0;
  int conditions = 0;
  // per digit: list of (condition index, coefficient)
  std::vector<std::vector<std::pair<int, std::uint64_t>>> cols;

  std::uint64_t count_solutions(std::uint64_t budget) const {
    double space = 1;
    for (int i = 0; i < digits; ++i) {
      space *= static_cast<double>(q);
      if (space > static_cast<double>(budget))
        throw domain_error("census: search space exceeds budget");
    }
    // assemble condition vectors, reducing coefficients mod q
    std::map<std::vector<std::uint64_t>, int> unique;
    std::vector<std::vector<std::uint64_t>> conds(static_cast<std::size_t>(conditions));
    for (auto& c : conds) c.assign(static_cast<std::size_t>(digits), 0);
    for (int b = 0; b < digits; ++b)
      for (auto [c, coeff] : cols[static_cast<std::size_t>(b)]) {
        auto& v = conds[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)];
        v = (v + coeff) % q;
      }
    for (auto& c : conds) {
      bool zero = true;
      for (auto v : c) zero = zero && v == 0;
      if (!zero) unique.emplace(std::move(c), static_cast<int>(unique.size()));
    }
    // digits constrained by some kept condition
    std::vector<int> live;
    {
      std::vector<bool> used(static_cast<std::size_t>(digits), false);
      for (const auto& [c, idx] : unique)
        for (int b = 0; b < digits; ++b)
          if (c[static_cast<std::size_t>(b)] != 0) used[static_cast<std::size_t>(b)] = true;
      for (int b = 0; b < digits; ++b)
        if (used[static_cast<std::size_t>(b)]) live.push_back(b);
    }
    std::uint64_t free_factor = 1;
    for (int i = 0; i < digits - static_cast<int>(live.size()); ++i) free_factor *= q;
    if (unique.empty()) return free_factor;
    const int keff = static_cast<int>(live.size());
    std::uint64_t total = 1;
    for (int i = 0; i < keff; ++i) total *= q;
    std::uint64_t hits =
        q == 2 ? count_gray(unique, live, total) : count_odometer(unique, live, total);
    return hits * free_factor;
  }

 private:
  std::uint64_t count_gray(const std::map<std::vector<std::uint64_t>, int>& unique,
                           const std::vector<int>& live, std::uint64_t total) const {
    const int nc = static_cast<int>(unique.size());
    const int keff = static_cast<int>(live.size());
    const int words = (nc + 63) / 64;
    std::vector<std::uint64_t> colmask(static_cast<std::size_t>(keff) *
                                           static_cast<std::size_t>(words),
                                       0);
    for (const auto& [cond, idx] : unique)
      for (int e = 0; e < keff; ++e)
        if (cond[static_cast<std::size_t>(live[static_cast<std::size_t>(e)])] != 0)
          colmask[static_cast<std::size_t>(e) * words + static_cast<std::size_t>(idx) / 64] ^=
              1ULL << (static_cast<unsigned>(idx) % 64);
    std::uint64_t count = 0;
    if (words == 1) {
      std::uint64_t state = 0;
      count = 1;  // the zero tuple
      for (std::uint64_t i = 1; i < total; ++i) {
        state ^= colmask[static_cast<std::size_t>(std::countr_zero(i))];
        count += state == 0;
      }
      return count;
    }
    std::vector<std::uint64_t> state(static_cast<std::size_t>(words), 0);
    count = 1;
    for (std::uint64_t i = 1; i < total; ++i) {
      const std::uint64_t* col =
          &colmask[static_cast<std::size_t>(std::countr_zero(i)) * static_cast<std::size_t>(words)];
      bool zero = true;
      for (int w = 0; w < words; ++w) {
        state[static_cast<std::size_t>(w)] ^= col[w];
        zero = zero && state[static_cast<std::size_t>(w)] == 0;
      }
      count += zero;
    }
    return count;
  }

  std::uint64_t count_odometer(const std::map<std::vector<std::uint64_t>, int>& unique,
                               const std::vector<int>& live, std::uint64_t total) const {
    const int keff = static_cast<int>(live.size());
    // per live digit: (condition index, coefficient)
    std::vector<std::vector<std::pair<int, std::uint64_t>>> lc(
        static_cast<std::size_t>(keff));
    for (const auto& [cond, idx] : unique)
      for (int e = 0; e < keff; ++e) {
        auto coeff = cond[static_cast<std::size_t>(live[static_cast<std::size_t>(e)])];
        if (coeff != 0) lc[static_cast<std::size_t>(e)].push_back({idx, coeff});
      }
    std::vector<std::uint64_t> value(unique.size(), 0);
    std::vector<std::uint64_t> digit(static_cast<std::size_t>(keff), 0);
    int nonzero = 0;
    std::uint64_t count = 1;  // the zero tuple
    auto bump = [&](int cond, std::uint64_t delta) {
      std::uint64_t& v = value[static_cast<std::size_t>(cond)];
      bool was = v != 0;
      v = (v + delta) % q;
      bool now = v != 0;
      nonzero += static_cast<int>(now) - static_cast<int>(was);
    };
    for (std::uint64_t i = 1; i < total; ++i) {
      int pos = keff - 1;
      while (true) {
        std::uint64_t& dg = digit[static_cast<std::size_t>(pos)];
        // wrapping subtracts (q-1) copies, the same as adding one
        for (auto [c, coeff] : lc[static_cast<std::size_t>(pos)]) bump(c, coeff);
        if (dg == q - 1) {
          dg = 0;
          --pos;
        } else {
          ++dg;
          break;
        }
      }
      if (nonzero == 0) ++count;
    }
    return count;
  }
};

inline int exact_log(std::uint64_t count, std::uint64_t q) {
  int e = 0;
  while (count > 1 && count % q == 0) {
    count /= q;
    ++e;
  }
  if (count != 1)
    throw internal_error("census: solution count is not a power of the field size");
  return e;
}

}  // namespace detail

struct BruteDims {
  int hom = 0;
  int der = 0;
};

// Exhaustive dimension of Hom_A(M, N): counts the total matrices theta
// with rho_M(g) theta = theta rho_N(g) on every generator.
inline int brute_hom_dim(const ModulePoint<PrimeField>& m, const ModulePoint<PrimeField>& n,
                         std::uint64_t budget = kCensusBudget) {
  const PrimeField& k = m.field;
  GeneratorForm gf = to_generator_form(*m.pres);
  const int dm = m.total_dim(), dn = n.total_dim();
  detail::LinearConditionCounter cnt;
  cnt.q = k.p;
  cnt.digits = dm * dn;
  cnt.conditions = gf.num_generators() * dm * dn;
  cnt.cols.assign(static_cast<std::size_t>(cnt.digits), {});
  for (int g = 0; g < gf.num_generators(); ++g) {
    Mat<PrimeField> gm = generator_image(m, gf, g);
    Mat<PrimeField> gn = generator_image(n, gf, g);
    for (int r = 0; r < dm; ++r)
      for (int c = 0; c < dn; ++c) {
        int cond = g * dm * dn + r * dn + c;
        for (int i = 0; i < dm; ++i)
          if (!k.is_zero(gm.at(r, i)))
            cnt.cols[static_cast<std::size_t>(i * dn + c)].push_back({cond, gm.at(r, i)});
        for (int j = 0; j < dn; ++j)
          if (!k.is_zero(gn.at(j, c)))
            cnt.cols[static_cast<std::size_t>(r * dn + j)].push_back({cond, k.neg(gn.at(j, c))});
      }
  }
  return detail::exact_log(cnt.count_solutions(budget), k.p);
}

// Exhaustive dimension of the derivation space: counts generator-value
// tuples satisfying the product-rule expansion of every generator-form
// relation. The condition coefficients are found by evaluating the
// expansion on unit tuples, an independent route from the solver path.
inline int brute_der_dim(const ModulePoint<PrimeField>& m, const ModulePoint<PrimeField>& n,
                         std::uint64_t budget = kCensusBudget) {
  const PrimeField& k = m.field;
  GeneratorForm gf = to_generator_form(*m.pres);
  const int dm = m.total_dim(), dn = n.total_dim();
  const int block = dm * dn;
  const int ng = gf.num_generators();
  std::vector<Mat<PrimeField>> gm, gn;
  for (int g = 0; g < ng; ++g) {
    gm.push_back(generator_image(m, gf, g));
    gn.push_back(generator_image(n, gf, g));
  }
  detail::LinearConditionCounter cnt;
  cnt.q = k.p;
  cnt.digits = ng * block;
  cnt.conditions = static_cast<int>(gf.relations.size()) * block;
  cnt.cols.assign(static_cast<std::size_t>(cnt.digits), {});
  for (int bit = 0; bit < cnt.digits; ++bit) {
    const int g = bit / block;
    const int bi = (bit % block) / dn;
    const int bj = (bit % block) % dn;
    for (std::size_t rel = 0; rel < gf.relations.size(); ++rel) {
      Mat<PrimeField> acc = zero_mat(k, dm, dn);
      for (const NCTerm& term : gf.relations[rel]) {
        const auto coeff = k.from_fraction(term.coeff.num, term.coeff.den);
        const int len = static_cast<int>(term.word.size());
        for (int j = 0; j < len; ++j) {
          if (term.word[static_cast<std::size_t>(j)] != g) continue;
          // prefix * E_{bi,bj} * suffix
          Mat<PrimeField> pre = identity_mat(k, dm);
          for (int l = 0; l < j; ++l)
            pre = mat_mul(k, pre, gm[static_cast<std::size_t>(term.word[static_cast<std::size_t>(l)])]);
          Mat<PrimeField> val = zero_mat(k, dm, dn);
          for (int r = 0; r < dm; ++r) {
            if (k.is_zero(pre.at(r, bi))) continue;
            val.at(r, bj) = pre.at(r, bi);
          }
          for (int l = j + 1; l < len; ++l)
            val = mat_mul(k, val, gn[static_cast<std::size_t>(term.word[static_cast<std::size_t>(l)])]);
          acc = mat_add(k, acc, mat_scale(k, coeff, val));
        }
      }
      for (int r = 0; r < dm; ++r)
        for (int c = 0; c < dn; ++c)
          if (!k.is_zero(acc.at(r, c)))
            cnt.cols[static_cast<std::size_t>(bit)].push_back(
                {static_cast<int>(rel) * block + r * dn + c, acc.at(r, c)});
    }
  }
  return detail::exact_log(cnt.count_solutions(budget), k.p);
}

inline BruteDims brute_dims(const ModulePoint<PrimeField>& m, const ModulePoint<PrimeField>& n,
                            std::uint64_t budget = kCensusBudget) {
  return BruteDims{brute_hom_dim(m, n, budget), brute_der_dim(m, n, budget)};
}

// Orbit count of the graded base-change action on an enumerated point
// list, by union-find over the full group. Budget-gated: the group
// size times the point count must stay under the budget.
inline int count_orbits(const std::vector<ModulePoint<PrimeField>>& points,
                        std::uint64_t budget = kCensusBudget) {
  if (points.empty()) return 0;
  const PrimeField& k = points[0].field;
  const Quiver& q = points[0].pres->quiver;
  const DimVec& d = points[0].dvec;
  // enumerate the group as tuples of invertible matrices per vertex
  std::vector<std::vector<Mat<PrimeField>>> gl;
  for (int v = 0; v < q.num_vertices(); ++v) {
    std::vector<Mat<PrimeField>> inv;
    int n = d.d[static_cast<std::size_t>(v)];
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(n) * n, 0);
    double space = 1;
    for (int i = 0; i < n * n; ++i) space *= static_cast<double>(k.p);
    if (space > static_cast<double>(budget))
      throw domain_error("count_orbits: group enumeration exceeds budget");
    while (true) {
      Mat<PrimeField> g = zero_mat(k, n, n);
      for (std::size_t i = 0; i < g.a.size(); ++i) g.a[i] = digits[i];
      if (rank(k, g) == n) inv.push_back(std::move(g));
      int i = n * n - 1;
      while (i >= 0 && digits[static_cast<std::size_t>(i)] == k.p - 1) {
        digits[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++digits[static_cast<std::size_t>(i)];
    }
    gl.push_back(std::move(inv));
  }
  double group_size = 1;
  for (const auto& g : gl) group_size *= static_cast<double>(g.size());
  if (group_size * static_cast<double>(points.size()) > static_cast<double>(budget))
    throw domain_error("count_orbits: action enumeration exceeds budget");
  // index points by their entry lists
  std::map<std::vector<std::uint64_t>, int> index;
  auto key_of = [](const ModulePoint<PrimeField>& m) {
    std::vector<std::uint64_t> key;
    for (const auto& x : m.arrow) key.insert(key.end(), x.a.begin(), x.a.end());
    return key;
  };
  for (std::size_t i = 0; i < points.size(); ++i) index[key_of(points[i])] = static_cast<int>(i);
  std::vector<int> parent(points.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  // walk the whole group for every point
  std::vector<std::size_t> group_digit(gl.size(), 0);
  while (true) {
    std::vector<Mat<PrimeField>> ginv;
    for (std::size_t v = 0; v < gl.size(); ++v)
      ginv.push_back(*mat_inverse(k, gl[v][group_digit[v]]));
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
      std::vector<Mat<PrimeField>> arrows;
      for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        arrows.push_back(
            mat_mul(k, ginv[static_cast<std::size_t>(ar.source)],
                    mat_mul(k, points[pi].arrow[static_cast<std::size_t>(a)],
                            gl[static_cast<std::size_t>(ar.target)][group_digit[static_cast<std::size_t>(ar.target)]])));
      }
      std::vector<std::uint64_t> key;
      for (const auto& x : arrows) key.insert(key.end(), x.a.begin(), x.a.end());
      auto it = index.find(key);
      if (it == index.end())
        throw internal_error("count_orbits: action left the enumerated point set");
      int a = find(static_cast<int>(pi)), b = find(it->second);
      if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }
    std::size_t v = 0;
    while (v < gl.size() && group_digit[v] + 1 == gl[v].size()) group_digit[v++] = 0;
    if (v == gl.size()) break;
    ++group_digit[v];
  }
  int orbits = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++orbits;
  return orbits;
}

}  // namespace modvar
