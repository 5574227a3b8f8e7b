#pragma once

#include <vector>

#include "modvar/mat.hpp"

namespace modvar {

// Scalar truncated power series over a field: coefficients c0..c_{N-1},
// arithmetic exact modulo T^N.
template <class F>
struct TruncSeries {
  std::vector<typename F::Elt> c;  // size = truncation order

  int order() const { return static_cast<int>(c.size()); }
};

template <class F>
TruncSeries<F> trunc_zero(const F& k, int order) {
  TruncSeries<F> s;
  s.c.assign(static_cast<std::size_t>(order), k.zero());
  return s;
}

template <class F>
TruncSeries<F> trunc_add(const F& k, const TruncSeries<F>& a, const TruncSeries<F>& b) {
  TruncSeries<F> r = a;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = k.add(r.c[i], b.c[i]);
  return r;
}

template <class F>
TruncSeries<F> trunc_mul(const F& k, const TruncSeries<F>& a, const TruncSeries<F>& b) {
  TruncSeries<F> r = trunc_zero(k, a.order());
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; i + j < a.order() && j < b.order(); ++j)
      r.c[static_cast<std::size_t>(i + j)] =
          k.add(r.c[static_cast<std::size_t>(i + j)],
                k.mul(a.c[static_cast<std::size_t>(i)], b.c[static_cast<std::size_t>(j)]));
  return r;
}

// Matrix with truncated power-series entries, stored as one base-field
// matrix per power of T. All arithmetic truncates at `order`.
template <class F>
struct TruncMat {
  std::vector<Mat<F>> coeff;  // coeff[r] multiplies T^r

  int order() const { return static_cast<int>(coeff.size()); }
  int rows() const { return coeff.empty() ? 0 : coeff[0].rows; }
  int cols() const { return coeff.empty() ? 0 : coeff[0].cols; }
};

template <class F>
TruncMat<F> tmat_from_constant(const F& k, const Mat<F>& m, int order) {
  TruncMat<F> t;
  t.coeff.push_back(m);
  for (int r = 1; r < order; ++r) t.coeff.push_back(zero_mat(k, m.rows, m.cols));
  return t;
}

template <class F>
TruncMat<F> tmat_zero(const F& k, int rows, int cols, int order) {
  return tmat_from_constant(k, zero_mat(k, rows, cols), order);
}

template <class F>
TruncMat<F> tmat_identity(const F& k, int n, int order) {
  return tmat_from_constant(k, identity_mat(k, n), order);
}

template <class F>
TruncMat<F> tmat_add(const F& k, const TruncMat<F>& a, const TruncMat<F>& b) {
  TruncMat<F> r = a;
  for (int i = 0; i < r.order(); ++i) r.coeff[static_cast<std::size_t>(i)] =
      mat_add(k, r.coeff[static_cast<std::size_t>(i)], b.coeff[static_cast<std::size_t>(i)]);
  return r;
}

template <class F>
TruncMat<F> tmat_sub(const F& k, const TruncMat<F>& a, const TruncMat<F>& b) {
  TruncMat<F> r = a;
  for (int i = 0; i < r.order(); ++i) r.coeff[static_cast<std::size_t>(i)] =
      mat_sub(k, r.coeff[static_cast<std::size_t>(i)], b.coeff[static_cast<std::size_t>(i)]);
  return r;
}

template <class F>
TruncMat<F> tmat_mul(const F& k, const TruncMat<F>& a, const TruncMat<F>& b) {
  TruncMat<F> r = tmat_zero(k, a.rows(), b.cols(), a.order());
  for (int i = 0; i < a.order(); ++i) {
    if (mat_is_zero(k, a.coeff[static_cast<std::size_t>(i)])) continue;
    for (int j = 0; i + j < a.order() && j < b.order(); ++j)
      r.coeff[static_cast<std::size_t>(i + j)] =
          mat_add(k, r.coeff[static_cast<std::size_t>(i + j)],
                  mat_mul(k, a.coeff[static_cast<std::size_t>(i)],
                          b.coeff[static_cast<std::size_t>(j)]));
  }
  return r;
}

template <class F>
bool tmat_is_zero(const F& k, const TruncMat<F>& a) {
  for (const auto& m : a.coeff)
    if (!mat_is_zero(k, m)) return false;
  return true;
}

template <class F>
bool tmat_eq(const F& k, const TruncMat<F>& a, const TruncMat<F>& b) {
  if (a.order() != b.order()) return false;
  for (int i = 0; i < a.order(); ++i)
    if (!mat_eq(k, a.coeff[static_cast<std::size_t>(i)], b.coeff[static_cast<std::size_t>(i)]))
      return false;
  return true;
}

// Multiplies by T^n (shifts coefficients up, dropping overflow).
template <class F>
TruncMat<F> tmat_shift(const F& k, const TruncMat<F>& a, int n) {
  TruncMat<F> r = tmat_zero(k, a.rows(), a.cols(), a.order());
  for (int i = 0; i + n < a.order(); ++i)
    r.coeff[static_cast<std::size_t>(i + n)] = a.coeff[static_cast<std::size_t>(i)];
  return r;
}

// Inverse, defined when the constant term is invertible: h_0 = g_0^-1,
// h_r = -g_0^-1 sum_{s=1}^r g_s h_{r-s}.
template <class F>
std::optional<TruncMat<F>> tmat_inverse(const F& k, const TruncMat<F>& g) {
  auto inv0 = mat_inverse(k, g.coeff[0]);
  if (!inv0) return std::nullopt;
  TruncMat<F> h = tmat_zero(k, g.rows(), g.cols(), g.order());
  h.coeff[0] = *inv0;
  for (int r = 1; r < g.order(); ++r) {
    Mat<F> acc = zero_mat(k, g.rows(), g.cols());
    for (int s = 1; s <= r; ++s)
      acc = mat_add(k, acc, mat_mul(k, g.coeff[static_cast<std::size_t>(s)],
                                    h.coeff[static_cast<std::size_t>(r - s)]));
    h.coeff[static_cast<std::size_t>(r)] = mat_neg(k, mat_mul(k, *inv0, acc));
  }
  return h;
}

// Field-like adapter whose elements are first-order jets a + eps*b with
// eps^2 = 0; the exact directional-derivative engine. Supports the ring
// operations needed to assemble linear systems and evaluate relations
// (no division).
template <class F>
struct DualNumbers {
  using Base = F;
  struct Elt {
    typename F::Elt val;
    typename F::Elt der;
  };

  F base;

  Elt zero() const { return {base.zero(), base.zero()}; }
  Elt one() const { return {base.one(), base.zero()}; }
  bool is_zero(const Elt& a) const { return base.is_zero(a.val) && base.is_zero(a.der); }
  bool eq(const Elt& a, const Elt& b) const {
    return base.eq(a.val, b.val) && base.eq(a.der, b.der);
  }
  Elt add(const Elt& a, const Elt& b) const {
    return {base.add(a.val, b.val), base.add(a.der, b.der)};
  }
  Elt sub(const Elt& a, const Elt& b) const {
    return {base.sub(a.val, b.val), base.sub(a.der, b.der)};
  }
  Elt neg(const Elt& a) const { return {base.neg(a.val), base.neg(a.der)}; }
  Elt mul(const Elt& a, const Elt& b) const {
    return {base.mul(a.val, b.val),
            base.add(base.mul(a.val, b.der), base.mul(a.der, b.val))};
  }
  Elt from_int(long long v) const { return {base.from_int(v), base.zero()}; }
  Elt from_fraction(long long num, long long den) const {
    return {base.from_fraction(num, den), base.zero()};
  }
};

// Lift a base matrix to jets: value part m, derivative part dm.
template <class F>
Mat<DualNumbers<F>> dual_lift(const F& k, const Mat<F>& m, const Mat<F>& dm) {
  Mat<DualNumbers<F>> r;
  r.rows = m.rows;
  r.cols = m.cols;
  r.a.resize(m.a.size());
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = {m.a[i], dm.a[i]};
  (void)k;
  return r;
}

template <class F>
Mat<F> dual_value(const F& k, const Mat<DualNumbers<F>>& m) {
  Mat<F> r = zero_mat(k, m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].val;
  return r;
}

template <class F>
Mat<F> dual_derivative(const F& k, const Mat<DualNumbers<F>>& m) {
  Mat<F> r = zero_mat(k, m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].der;
  return r;
}

}  // namespace modvar
