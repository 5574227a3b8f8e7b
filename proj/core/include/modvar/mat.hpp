#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "modvar/field.hpp"
#include "modvar/rng.hpp"

namespace modvar {

// Dense row-major matrix over an exact field. Zero-row and zero-column
// shapes are first-class citizens; they show up constantly as arrow
// matrices touching zero-dimensional vertices.
template <class F>
struct Mat {
  using Elt = typename F::Elt;

  int rows = 0;
  int cols = 0;
  std::vector<Elt> a;

  Mat() = default;
  Mat(int r, int c, Elt fill) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

  Elt& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Elt& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

template <class F>
Mat<F> zero_mat(const F& k, int r, int c) {
  return Mat<F>(r, c, k.zero());
}

template <class F>
Mat<F> identity_mat(const F& k, int n) {
  Mat<F> m = zero_mat(k, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = k.one();
  return m;
}

template <class F>
bool mat_eq(const F& k, const Mat<F>& x, const Mat<F>& y) {
  if (x.rows != y.rows || x.cols != y.cols) return false;
  for (std::size_t i = 0; i < x.a.size(); ++i)
    if (!k.eq(x.a[i], y.a[i])) return false;
  return true;
}

template <class F>
bool mat_is_zero(const F& k, const Mat<F>& x) {
  for (const auto& e : x.a)
    if (!k.is_zero(e)) return false;
  return true;
}

template <class F>
Mat<F> mat_add(const F& k, const Mat<F>& x, const Mat<F>& y) {
  assert(x.rows == y.rows && x.cols == y.cols);
  Mat<F> r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = k.add(r.a[i], y.a[i]);
  return r;
}

template <class F>
Mat<F> mat_sub(const F& k, const Mat<F>& x, const Mat<F>& y) {
  assert(x.rows == y.rows && x.cols == y.cols);
  Mat<F> r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = k.sub(r.a[i], y.a[i]);
  return r;
}

template <class F>
Mat<F> mat_neg(const F& k, const Mat<F>& x) {
  Mat<F> r = x;
  for (auto& e : r.a) e = k.neg(e);
  return r;
}

template <class F>
Mat<F> mat_scale(const F& k, const typename F::Elt& c, const Mat<F>& x) {
  Mat<F> r = x;
  for (auto& e : r.a) e = k.mul(c, e);
  return r;
}

template <class F>
Mat<F> mat_mul(const F& k, const Mat<F>& x, const Mat<F>& y) {
  assert(x.cols == y.rows);
  Mat<F> r = zero_mat(k, x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int l = 0; l < x.cols; ++l) {
      const auto& xe = x.at(i, l);
      if (k.is_zero(xe)) continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) = k.add(r.at(i, j), k.mul(xe, y.at(l, j)));
    }
  return r;
}

template <class F>
Mat<F> mat_transpose(const F&, const Mat<F>& x) {
  Mat<F> r;
  r.rows = x.cols;
  r.cols = x.rows;
  r.a.resize(x.a.size());
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

template <class F>
Mat<F> mat_pow(const F& k, Mat<F> x, unsigned e) {
  assert(x.rows == x.cols);
  Mat<F> r = identity_mat(k, x.rows);
  while (e > 0) {
    if (e & 1u) r = mat_mul(k, r, x);
    e >>= 1u;
    if (e) x = mat_mul(k, x, x);
  }
  return r;
}

template <class F>
Mat<F> random_matrix(const F& k, int rows, int cols, Rng& rng) {
  Mat<F> m = zero_mat(k, rows, cols);
  for (auto& e : m.a) e = k.sample(rng);
  return m;
}

// Writes `block` into `dst` with top-left corner at (r0, c0).
template <class F>
void set_block(Mat<F>& dst, int r0, int c0, const Mat<F>& block) {
  assert(r0 + block.rows <= dst.rows && c0 + block.cols <= dst.cols);
  for (int i = 0; i < block.rows; ++i)
    for (int j = 0; j < block.cols; ++j) dst.at(r0 + i, c0 + j) = block.at(i, j);
}

template <class F>
Mat<F> get_block(const F&, const Mat<F>& src, int r0, int c0, int rows, int cols) {
  assert(r0 + rows <= src.rows && c0 + cols <= src.cols);
  Mat<F> b;
  b.rows = rows;
  b.cols = cols;
  b.a.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b.a.push_back(src.at(r0 + i, c0 + j));
  return b;
}

// Reduced row echelon form with the pivot column list; the workhorse
// behind rank / kernel / solve. Deterministic: pivots are the first
// nonzero entry scanning left to right, top to bottom.
template <class F>
struct Echelon {
  Mat<F> r;
  std::vector<int> pivot_cols;
  int rank = 0;
};

template <class F>
Echelon<F> echelonize(const F& k, Mat<F> m) {
  Echelon<F> e;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int piv = -1;
    for (int i = row; i < m.rows; ++i)
      if (!k.is_zero(m.at(i, col))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
    const auto pinv = k.inv(m.at(row, col));
    for (int j = col; j < m.cols; ++j) m.at(row, j) = k.mul(pinv, m.at(row, j));
    for (int i = 0; i < m.rows; ++i) {
      if (i == row) continue;
      const auto f = m.at(i, col);
      if (k.is_zero(f)) continue;
      for (int j = col; j < m.cols; ++j)
        m.at(i, j) = k.sub(m.at(i, j), k.mul(f, m.at(row, j)));
    }
    e.pivot_cols.push_back(col);
    ++row;
  }
  e.rank = row;
  e.r = std::move(m);
  return e;
}

template <class F>
int rank(const F& k, const Mat<F>& m) {
  return echelonize(k, m).rank;
}

// Basis of the right null space {v : m v = 0} as column vectors.
// Size is always cols - rank; the basis is the canonical RREF one
// (free variable set to 1, pivots back-substituted).
template <class F>
std::vector<Mat<F>> kernel_basis(const F& k, const Mat<F>& m) {
  Echelon<F> e = echelonize(k, m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols), false);
  for (int c : e.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<Mat<F>> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    Mat<F> v = zero_mat(k, m.cols, 1);
    v.at(free, 0) = k.one();
    for (int i = 0; i < e.rank; ++i)
      v.at(e.pivot_cols[static_cast<std::size_t>(i)], 0) = k.neg(e.r.at(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

// One exact solution of m x = rhs (multi-column rhs supported), or
// nullopt when rhs is outside the column space. Free variables are set
// to zero, so the answer is canonical.
template <class F>
std::optional<Mat<F>> solve_linear(const F& k, const Mat<F>& m, const Mat<F>& rhs) {
  if (m.rows != rhs.rows) throw domain_error("solve_linear: row count mismatch");
  Mat<F> aug = zero_mat(k, m.rows, m.cols + rhs.cols);
  set_block(aug, 0, 0, m);
  set_block(aug, 0, m.cols, rhs);
  Echelon<F> e = echelonize(k, aug);
  // any pivot in the rhs columns means inconsistency
  for (int c : e.pivot_cols)
    if (c >= m.cols) return std::nullopt;
  Mat<F> x = zero_mat(k, m.cols, rhs.cols);
  for (int i = 0; i < e.rank; ++i) {
    int pc = e.pivot_cols[static_cast<std::size_t>(i)];
    for (int j = 0; j < rhs.cols; ++j) x.at(pc, j) = e.r.at(i, m.cols + j);
  }
  return x;
}

// Inverse, or nullopt when singular. (Solving against the identity is
// consistent exactly when the rank is full.)
template <class F>
std::optional<Mat<F>> mat_inverse(const F& k, const Mat<F>& m) {
  if (m.rows != m.cols) return std::nullopt;
  return solve_linear(k, m, identity_mat(k, m.rows));
}

// Basis (as rows of the returned matrix) of the row space.
template <class F>
Mat<F> row_space_basis(const F& k, const Mat<F>& m) {
  Echelon<F> e = echelonize(k, m);
  return get_block(k, e.r, 0, 0, e.rank, m.cols);
}

// Basis (as rows) of the left null space {v : v m = 0}.
template <class F>
Mat<F> left_kernel_basis(const F& k, const Mat<F>& m) {
  auto kb = kernel_basis(k, mat_transpose(k, m));
  Mat<F> r = zero_mat(k, static_cast<int>(kb.size()), m.rows);
  for (int i = 0; i < static_cast<int>(kb.size()); ++i)
    for (int j = 0; j < m.rows; ++j) r.at(i, j) = kb[static_cast<std::size_t>(i)].at(j, 0);
  return r;
}

}  // namespace modvar
