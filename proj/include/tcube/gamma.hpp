#pragma once

#include <cmath>
#include <string>

#include "tcube/cubic.hpp"
#include "tcube/dense.hpp"

namespace tcube {

// Shift operator T = M_c (x) I_m, where M_c is the s-cycle permutation
// sending block j to block j+1 (mod s). T^s = I, and fold(T^k unfold(A)) has
// frontal slice j equal to A^((j-k) mod s).
template <class D>
DenseMatrix<D> shift_matrix(int s, int m, D dom) {
  if (s < 1 || m < 1) throw ShapeError("shift_matrix: s and m must be positive");
  DenseMatrix<D> t(s * m, s * m, dom);
  for (int j = 0; j < s; ++j) {
    int src = j, dst = (j + 1) % s;
    for (int i = 0; i < m; ++i) t.at(dst * m + i, src * m + i) = dom.one();
  }
  return t;
}

inline DenseMatrix<RealDomain> shift_matrix(int s, int m) {
  return shift_matrix(s, m, RealDomain{});
}

// Block-circulant image of A: sm x sn, block (r,c) = A^((r-c) mod s). The
// first block column is unfold(A) and block column j is T^j unfold(A).
template <class D>
DenseMatrix<D> gamma(const CubicMatrix<D>& a) {
  const int m = a.m(), n = a.n(), s = a.s();
  DenseMatrix<D> g(s * m, s * n, a.domain());
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) {
      const int k = ((r - c) % s + s) % s;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) g.at(r * m + i, c * n + j) = a.at(i, j, k);
    }
  }
  return g;
}

namespace detail {

template <class D>
bool circulant_block_ok(const DenseMatrix<D>& g, const CubicMatrix<D>& a, double tol) {
  const int m = a.m(), n = a.n(), s = a.s();
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) {
      const int k = ((r - c) % s + s) % s;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
          if constexpr (D::is_modular) {
            if (g.at(r * m + i, c * n + j) != a.at(i, j, k)) return false;
          } else {
            if (std::abs(g.at(r * m + i, c * n + j) - a.at(i, j, k)) > tol) return false;
          }
        }
      }
    }
  }
  return true;
}

}  // namespace detail

// Left inverse of gamma: extracts the first block column. With strict
// validation the whole matrix must be block-circulant, exactly for Mod and
// within 1e-9 * ||M||_F for Real; intermediate results of dense computations
// are circulant only up to round-off, hence the opt-in.
template <class D>
CubicMatrix<D> gamma_inverse(const DenseMatrix<D>& g, const Dims& d, bool strict = false) {
  if (g.rows() != d.s * d.m || g.cols() != d.s * d.n) {
    throw ShapeError("gamma_inverse: matrix " + std::to_string(g.rows()) + "x" +
                     std::to_string(g.cols()) + " is not gamma-shaped for dims " + to_string(d));
  }
  CubicMatrix<D> a(d, g.domain());
  for (int k = 0; k < d.s; ++k)
    for (int i = 0; i < d.m; ++i)
      for (int j = 0; j < d.n; ++j) a.at(i, j, k) = g.at(k * d.m + i, j);
  if (strict) {
    double tol = 0.0;
    if constexpr (!D::is_modular) tol = 1e-9 * frobenius_norm(g);
    if (!detail::circulant_block_ok(g, a, tol)) {
      throw ShapeError("gamma_inverse: matrix is not block-circulant");
    }
  }
  return a;
}

}  // namespace tcube
