#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "tcube/dense.hpp"
#include "tcube/domain.hpp"
#include "tcube/error.hpp"

namespace tcube {

// LU with partial pivoting. min_abs_pivot doubles as a cheap conditioning
// signal: callers compare it against a threshold scaled by the input norm.
struct LuFactor {
  DenseMatrix<RealDomain> lu;
  std::vector<int> perm;
  int sign = 1;
  double min_abs_pivot = 0.0;
};

inline LuFactor lu_factor(DenseMatrix<RealDomain> a) {
  if (a.rows() != a.cols()) throw ShapeError("lu_factor: matrix must be square");
  const int n = a.rows();
  LuFactor f{std::move(a), std::vector<int>(n), 1, 0.0};
  for (int i = 0; i < n; ++i) f.perm[i] = i;
  double minp = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(f.lu.at(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(f.lu.at(i, k));
      if (v > best) { best = v; piv = i; }
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu.at(k, j), f.lu.at(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    const double pivot = f.lu.at(k, k);
    minp = std::min(minp, std::abs(pivot));
    if (pivot == 0.0) continue;  // exactly singular; keep factoring the rest
    for (int i = k + 1; i < n; ++i) {
      const double l = f.lu.at(i, k) / pivot;
      f.lu.at(i, k) = l;
      for (int j = k + 1; j < n; ++j) f.lu.at(i, j) -= l * f.lu.at(k, j);
    }
  }
  f.min_abs_pivot = minp;
  return f;
}

inline double lu_det(const LuFactor& f) {
  double d = f.sign;
  for (int i = 0; i < f.lu.rows(); ++i) d *= f.lu.at(i, i);
  return d;
}

// Solves A X = B for each column of B.
inline DenseMatrix<RealDomain> lu_solve(const LuFactor& f, const DenseMatrix<RealDomain>& b) {
  const int n = f.lu.rows();
  if (b.rows() != n) throw ShapeError("lu_solve: rhs rows mismatch");
  if (f.min_abs_pivot == 0.0) throw SingularError("lu_solve: exactly singular factor");
  DenseMatrix<RealDomain> x(n, b.cols(), RealDomain{});
  for (int c = 0; c < b.cols(); ++c) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      double acc = b.at(f.perm[i], c);
      for (int j = 0; j < i; ++j) acc -= f.lu.at(i, j) * y[j];
      y[i] = acc;
    }
    for (int i = n - 1; i >= 0; --i) {
      double acc = y[i];
      for (int j = i + 1; j < n; ++j) acc -= f.lu.at(i, j) * x.at(j, c);
      x.at(i, c) = acc / f.lu.at(i, i);
    }
  }
  return x;
}

inline DenseMatrix<RealDomain> inverse_real(const DenseMatrix<RealDomain>& a,
                                            double rel_threshold = 1e-12) {
  LuFactor f = lu_factor(a);
  if (f.min_abs_pivot <= rel_threshold * std::max(1.0, frobenius_norm(a))) {
    throw SingularError("inverse_real: matrix is singular or near-singular");
  }
  return lu_solve(f, DenseMatrix<RealDomain>::identity(a.rows(), RealDomain{}));
}

// Exact integer determinant of the canonical lift of a Mod matrix
// (Bareiss fraction-free elimination in 128-bit).
inline __int128 det_int_bareiss(const DenseMatrix<ModDomain>& a) {
  if (a.rows() != a.cols()) throw ShapeError("det_int_bareiss: matrix must be square");
  const int n = a.rows();
  std::vector<__int128> w(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(i) * n + j] = a.at(i, j);
  auto at = [&](int i, int j) -> __int128& { return w[static_cast<std::size_t>(i) * n + j]; };
  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (at(i, k) != 0) { piv = i; break; }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  // extended gcd; a must be a unit mod m
  std::int64_t r0 = m, r1 = ((a % m) + m) % m, t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    r0 -= q * r1; std::swap(r0, r1);
    t0 -= q * t1; std::swap(t0, t1);
  }
  if (r0 != 1) throw SingularError("inverse_mod: " + std::to_string(a) + " is not a unit");
  return ((t0 % m) + m) % m;
}

// Adjugate reduced mod m, via exact minor determinants.
inline DenseMatrix<ModDomain> adjugate_mod(const DenseMatrix<ModDomain>& a) {
  if (a.rows() != a.cols()) throw ShapeError("adjugate_mod: matrix must be square");
  const int n = a.rows();
  const ModDomain dom = a.domain();
  DenseMatrix<ModDomain> adj(n, n, dom);
  if (n == 1) {
    adj.at(0, 0) = dom.one();
    return adj;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      DenseMatrix<ModDomain> minor(n - 1, n - 1, dom);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor.at(rr, cc++) = a.at(r, c);
        }
        ++rr;
      }
      __int128 d = det_int_bareiss(minor);
      std::int64_t dm = static_cast<std::int64_t>(d % dom.modulus);
      if ((i + j) % 2 != 0) dm = -dm;
      adj.at(j, i) = dom.canon(dm);  // adjugate transposes the cofactor grid
    }
  }
  return adj;
}

inline DenseMatrix<RealDomain> matrix_power(const DenseMatrix<RealDomain>& a, int k) {
  if (a.rows() != a.cols()) throw ShapeError("matrix_power: matrix must be square");
  DenseMatrix<RealDomain> r = DenseMatrix<RealDomain>::identity(a.rows(), RealDomain{});
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

// Dense matrix exponential by scaling and squaring with a Taylor kernel.
inline DenseMatrix<RealDomain> expm(const DenseMatrix<RealDomain>& a) {
  if (a.rows() != a.cols()) throw ShapeError("expm: matrix must be square");
  const int n = a.rows();
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(a.at(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  double scale_f = 1.0;
  while (norm * scale_f > 0.5) { scale_f *= 0.5; ++squarings; }
  DenseMatrix<RealDomain> m = scale(scale_f, a);
  DenseMatrix<RealDomain> term = DenseMatrix<RealDomain>::identity(n, RealDomain{});
  DenseMatrix<RealDomain> sum = term;
  for (int k = 1; k <= 64; ++k) {
    term = scale(1.0 / k, term * m);
    sum = add(sum, term);
    if (frobenius_norm(term) <= 1e-18 * std::max(1.0, frobenius_norm(sum))) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// exp(M h) together with G(h) = integral_0^h exp(M s) ds, via the augmented
// block matrix [[M, I], [0, 0]].
inline std::pair<DenseMatrix<RealDomain>, DenseMatrix<RealDomain>> expm_with_integral(
    const DenseMatrix<RealDomain>& m, double h) {
  const int n = m.rows();
  DenseMatrix<RealDomain> aug(2 * n, 2 * n, RealDomain{});
  aug.paste(0, 0, scale(h, m));
  aug.paste(0, n, scale(h, DenseMatrix<RealDomain>::identity(n, RealDomain{})));
  DenseMatrix<RealDomain> e = expm(aug);
  return {e.block(0, 0, n, n), e.block(0, n, n, n)};
}

}  // namespace tcube
