#pragma once

#include <algorithm>
#include <map>
#include <numeric>

#include "modvar/hom_der.hpp"
#include "modvar/module_point.hpp"
#include "modvar/trunc_series.hpp"

namespace modvar {

namespace detail {

inline Coeff coeff_normalize(long long num, long long den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return {num, den};
}

inline Coeff coeff_add(const Coeff& a, const Coeff& b) {
  return coeff_normalize(a.num * b.den + b.num * a.den, a.den * b.den);
}

inline Coeff coeff_mul(const Coeff& a, const Coeff& b) {
  return coeff_normalize(a.num * b.num, a.den * b.den);
}

}  // namespace detail

// Commutative polynomial in the graded arrow-entry variables, exact
// rational coefficients. Monomials are sorted variable-id multisets.
struct Poly {
  std::map<std::vector<int>, Coeff> terms;

  bool is_zero() const { return terms.empty(); }

  void add_term(const std::vector<int>& mono, const Coeff& c) {
    auto it = terms.find(mono);
    if (it == terms.end()) {
      if (c.num != 0) terms.emplace(mono, c);
      return;
    }
    it->second = detail::coeff_add(it->second, c);
    if (it->second.num == 0) terms.erase(it);
  }
};

// Defining equations of the module variety at a dimension vector: one
// polynomial per entry of each evaluated relation. Variables are the
// arrow entries, arrow-major then row-major.
struct PolySystem {
  DimVec dvec;
  std::vector<int> var_off;  // per arrow, plus sentinel
  std::vector<Poly> equations;

  int num_vars() const { return var_off.empty() ? 0 : var_off.back(); }
};

inline PolySystem variety_equations(const AlgebraPresentation& p, const DimVec& d) {
  if (d.size() != p.quiver.num_vertices())
    throw domain_error("variety_equations: dimension vector does not match vertex count");
  const Quiver& q = p.quiver;
  PolySystem sys;
  sys.dvec = d;
  sys.var_off.assign(static_cast<std::size_t>(q.num_arrows()) + 1, 0);
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
    sys.var_off[static_cast<std::size_t>(a) + 1] =
        sys.var_off[static_cast<std::size_t>(a)] +
        d.d[static_cast<std::size_t>(ar.source)] * d.d[static_cast<std::size_t>(ar.target)];
  }
  auto dim_at = [&](int v) { return d.d[static_cast<std::size_t>(v)]; };
  for (const Relation& rel : p.relations) {
    int u = path_source(q, rel.terms.front().path);
    int v = path_target(q, rel.terms.front().path);
    // matrix of polynomials accumulating the relation value
    std::vector<Poly> acc(static_cast<std::size_t>(dim_at(u) * dim_at(v)));
    for (const RelationTerm& term : rel.terms) {
      // multiply the symbolic arrow matrices along the path
      int rows = dim_at(u);
      std::vector<Poly> cur(static_cast<std::size_t>(rows) * rows);
      for (int i = 0; i < rows; ++i) cur[static_cast<std::size_t>(i * rows + i)].add_term({}, {1, 1});
      int cur_cols = rows;
      for (int a : term.path.arrows) {
        const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
        int mid = dim_at(ar.source), nc = dim_at(ar.target);
        std::vector<Poly> next(static_cast<std::size_t>(rows) * nc);
        for (int i = 0; i < rows; ++i)
          for (int l = 0; l < mid; ++l) {
            const Poly& pe = cur[static_cast<std::size_t>(i * cur_cols + l)];
            if (pe.is_zero()) continue;
            for (int j = 0; j < nc; ++j) {
              int var = sys.var_off[static_cast<std::size_t>(a)] + l * nc + j;
              for (const auto& [mono, c] : pe.terms) {
                std::vector<int> m2 = mono;
                m2.insert(std::upper_bound(m2.begin(), m2.end(), var), var);
                next[static_cast<std::size_t>(i * nc + j)].add_term(m2, c);
              }
            }
          }
        cur = std::move(next);
        cur_cols = nc;
      }
      for (std::size_t e = 0; e < acc.size(); ++e)
        for (const auto& [mono, c] : cur[e].terms)
          acc[e].add_term(mono, detail::coeff_mul(c, term.coeff));
    }
    for (auto& poly : acc) sys.equations.push_back(std::move(poly));
  }
  return sys;
}

// Values of the arrow-entry variables at a module point, in system order.
template <class F>
std::vector<typename F::Elt> system_variables_at(const PolySystem&, const ModulePoint<F>& m) {
  std::vector<typename F::Elt> vals;
  for (const Mat<F>& x : m.arrow)
    for (const auto& e : x.a) vals.push_back(e);
  return vals;
}

template <class F>
typename F::Elt evaluate_poly(const F& k, const Poly& p,
                              const std::vector<typename F::Elt>& vars) {
  auto acc = k.zero();
  for (const auto& [mono, c] : p.terms) {
    auto t = k.from_fraction(c.num, c.den);
    for (int v : mono) t = k.mul(t, vars[static_cast<std::size_t>(v)]);
    acc = k.add(acc, t);
  }
  return acc;
}

template <class F>
std::vector<typename F::Elt> evaluate_system(const F& k, const PolySystem& sys,
                                             const ModulePoint<F>& m) {
  auto vars = system_variables_at(sys, m);
  std::vector<typename F::Elt> out;
  for (const Poly& p : sys.equations) out.push_back(evaluate_poly(k, p, vars));
  return out;
}

// Formal partial derivative, used as a cross-check for the jet route.
inline Poly poly_derivative(const Poly& p, int var) {
  Poly d;
  for (const auto& [mono, c] : p.terms) {
    long long mult = static_cast<long long>(std::count(mono.begin(), mono.end(), var));
    if (mult == 0) continue;
    std::vector<int> m2 = mono;
    m2.erase(std::find(m2.begin(), m2.end(), var));
    d.add_term(m2, detail::coeff_mul(c, {mult, 1}));
  }
  return d;
}

// Drops every term containing one of the given variables; the symbolic
// substitution var -> 0.
inline PolySystem substitute_zero(const PolySystem& sys, const std::vector<int>& vars) {
  std::vector<bool> zeroed(static_cast<std::size_t>(sys.num_vars()), false);
  for (int v : vars) zeroed[static_cast<std::size_t>(v)] = true;
  PolySystem out;
  out.dvec = sys.dvec;
  out.var_off = sys.var_off;
  for (const Poly& p : sys.equations) {
    Poly q;
    for (const auto& [mono, c] : p.terms) {
      bool keep = true;
      for (int v : mono)
        if (zeroed[static_cast<std::size_t>(v)]) {
          keep = false;
          break;
        }
      if (keep) q.add_term(mono, c);
    }
    out.equations.push_back(std::move(q));
  }
  return out;
}

// Jacobian of the defining equations at a valid point, as a matrix over
// the base field; each column is the first-order jet of the system along
// one arrow-entry direction.
template <class F>
Mat<F> variety_jacobian(const ModulePoint<F>& m) {
  const F& k = m.field;
  const Quiver& q = m.pres->quiver;
  PolySystem sys = variety_equations(*m.pres, m.dvec);
  Mat<F> jac = zero_mat(k, static_cast<int>(sys.equations.size()), sys.num_vars());
  DualNumbers<F> jets{k};
  for (int var = 0; var < sys.num_vars(); ++var) {
    // locate (arrow, entry) of this variable
    int a = 0;
    while (sys.var_off[static_cast<std::size_t>(a) + 1] <= var) ++a;
    int entry = var - sys.var_off[static_cast<std::size_t>(a)];
    std::vector<Mat<DualNumbers<F>>> arrows;
    for (int b = 0; b < q.num_arrows(); ++b) {
      Mat<F> dir = zero_mat(k, m.arrow[static_cast<std::size_t>(b)].rows,
                            m.arrow[static_cast<std::size_t>(b)].cols);
      if (b == a && !dir.a.empty()) dir.a[static_cast<std::size_t>(entry)] = k.one();
      arrows.push_back(dual_lift(k, m.arrow[static_cast<std::size_t>(b)], dir));
    }
    ModulePoint<DualNumbers<F>> md{m.pres, jets, m.dvec, std::move(arrows)};
    int row = 0;
    for (const Relation& rel : m.pres->relations) {
      Mat<DualNumbers<F>> val = eval_relation(md, rel);
      for (const auto& e : val.a) jac.at(row++, var) = e.der;
    }
  }
  return jac;
}

// Dimension of the scheme tangent space at a valid point: number of
// graded arrow variables minus the Jacobian rank.
template <class F>
int tangent_dim(const ModulePoint<F>& m) {
  if (!is_valid_point(m)) throw domain_error("tangent_dim: point is not a valid module structure");
  PolySystem sys = variety_equations(*m.pres, m.dvec);
  if (sys.equations.empty()) return sys.num_vars();
  Mat<F> jac = variety_jacobian(m);
  return sys.num_vars() - rank(m.field, jac);
}

}  // namespace modvar
