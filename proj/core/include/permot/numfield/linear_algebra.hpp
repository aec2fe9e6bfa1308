#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "permot/error.hpp"
#include "permot/numfield/matrix.hpp"

namespace permot {

// Gaussian elimination over an exact field T.  T must provide the field
// operators and a free is_zero(const T&); zero() / one() are produced from
// value-initialization and T(1).

template <class T>
struct RowEchelon {
  Matrix<T> reduced;                  // reduced row echelon form
  std::vector<std::size_t> pivots;    // pivot column of each nonzero row
};

template <class T>
RowEchelon<T> rref(Matrix<T> m) {
  RowEchelon<T> out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && is_zero(m(piv, col))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    const T inv = T(1) / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      const T f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
  return rref(m).pivots.size();
}

// Basis of the right kernel, one column per basis vector.
template <class T>
Matrix<T> kernel_basis(const Matrix<T>& a) {
  const RowEchelon<T> e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(a.cols());
    v[free] = T(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return Matrix<T>::from_columns(a.cols(), basis);
}

template <class T>
struct AffineSolution {
  Matrix<T> particular;  // cols(A) x cols(B)
  Matrix<T> kernel;      // cols(A) x dim ker(A)
};

// Solves A X = B exactly.  Returns std::nullopt when the system is
// inconsistent; throws DimensionError if A and B have different row counts.
template <class T>
std::optional<AffineSolution<T>> exact_solve(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows())
    throw DimensionError("exact_solve: A is " + a.shape() + " but B is " + b.shape());
  Matrix<T> aug(a.rows(), a.cols() + b.cols());
  aug.set_block(0, 0, a);
  aug.set_block(0, a.cols(), b);
  const RowEchelon<T> e = rref(aug);
  for (auto p : e.pivots)
    if (p >= a.cols()) return std::nullopt;
  AffineSolution<T> sol;
  sol.particular = Matrix<T>(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r)
    for (std::size_t j = 0; j < b.cols(); ++j)
      sol.particular(e.pivots[r], j) = e.reduced(r, a.cols() + j);
  sol.kernel = kernel_basis(a);
  return sol;
}

// Inverse of a square matrix; throws DomainError when singular.
template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw DimensionError("inverse of non-square " + a.shape() + " matrix");
  const std::size_t n = a.rows();
  Matrix<T> aug(n, 2 * n);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < n; ++i) aug(i, n + i) = T(1);
  const RowEchelon<T> e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw DomainError("matrix is singular");
  return e.reduced.block(0, n, n, n);
}

template <class T>
T determinant(Matrix<T> m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of non-square " + m.shape() + " matrix");
  const std::size_t n = m.rows();
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && is_zero(m(piv, col))) ++piv;
    if (piv == n) return T();
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det = det * m(col, col);
    const T inv = T(1) / m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (is_zero(m(i, col))) continue;
      const T f = m(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

// True when every column of `sub` lies in the column span of `space`.
template <class T>
bool column_span_contains(const Matrix<T>& space, const Matrix<T>& sub) {
  if (space.rows() != sub.rows()) throw DimensionError("span containment on different ambient spaces");
  if (sub.cols() == 0) return true;
  Matrix<T> joined(space.rows(), space.cols() + sub.cols());
  joined.set_block(0, 0, space);
  joined.set_block(0, space.cols(), sub);
  return rank(joined) == rank(space);
}

}  // namespace permot
