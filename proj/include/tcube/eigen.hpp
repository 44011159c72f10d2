#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "tcube/dense.hpp"
#include "tcube/error.hpp"
#include "tcube/solve.hpp"

namespace tcube {

inline double trace(const DenseMatrix<RealDomain>& a) {
  double t = 0.0;
  for (int i = 0; i < a.rows(); ++i) t += a.at(i, i);
  return t;
}

// Characteristic polynomial by the Faddeev-LeVerrier recursion. Returns
// ascending coefficients c[0..k] with c[k] = 1 (monic); O(k^4) but exact-ish
// coefficients are what Cayley-Hamilton needs.
inline std::vector<double> char_poly(const DenseMatrix<RealDomain>& m) {
  if (m.rows() != m.cols()) throw ShapeError("char_poly: matrix must be square");
  const int k = m.rows();
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  c[k] = 1.0;
  DenseMatrix<RealDomain> b = DenseMatrix<RealDomain>::identity(k, RealDomain{});
  for (int j = 1; j <= k; ++j) {
    DenseMatrix<RealDomain> mb = m * b;
    const double cj = -trace(mb) / j;
    c[k - j] = cj;
    b = mb;
    for (int i = 0; i < k; ++i) b.at(i, i) += cj;
  }
  return c;
}

namespace detail {

// Reduce to upper Hessenberg form by stabilized elementary similarity
// transformations (pivoted Gaussian eliminations).
inline void hessenberg_in_place(DenseMatrix<RealDomain>& h) {
  const int n = h.rows();
  for (int m = 1; m < n - 1; ++m) {
    int piv = m;
    double best = std::abs(h.at(m, m - 1));
    for (int i = m + 1; i < n; ++i) {
      if (std::abs(h.at(i, m - 1)) > best) { best = std::abs(h.at(i, m - 1)); piv = i; }
    }
    if (piv != m) {
      for (int j = 0; j < n; ++j) std::swap(h.at(piv, j), h.at(m, j));
      for (int i = 0; i < n; ++i) std::swap(h.at(i, piv), h.at(i, m));
    }
    const double x = h.at(m, m - 1);
    if (x == 0.0) continue;
    for (int i = m + 1; i < n; ++i) {
      double y = h.at(i, m - 1) / x;
      if (y != 0.0) {
        for (int j = m - 1; j < n; ++j) h.at(i, j) -= y * h.at(m, j);
        for (int r = 0; r < n; ++r) h.at(r, m) += y * h.at(r, i);
      }
    }
  }
  for (int i = 2; i < n; ++i)
    for (int j = 0; j < i - 1; ++j) h.at(i, j) = 0.0;
}

}  // namespace detail

// Eigenvalues of a real square matrix: Hessenberg reduction followed by the
// Francis double-shift QR iteration with deflation. Classic hqr scheme.
inline std::vector<std::complex<double>> eigenvalues(DenseMatrix<RealDomain> a,
                                                     int max_sweeps = 60) {
  if (a.rows() != a.cols()) throw ShapeError("eigenvalues: matrix must be square");
  const int n = a.rows();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  if (n == 1) { out[0] = a.at(0, 0); return out; }
  detail::hessenberg_in_place(a);
  auto& h = a;
  const double eps = std::numeric_limits<double>::epsilon();
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 1); j < n; ++j) anorm += std::abs(h.at(i, j));
  if (anorm == 0.0) anorm = 1.0;

  int nn = n - 1;
  double t_shift = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(h.at(l - 1, l - 1)) + std::abs(h.at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(h.at(l, l - 1)) <= eps * s) { h.at(l, l - 1) = 0.0; break; }
      }
      if (l < 0) l = 0;
      double x = h.at(nn, nn);
      if (l == nn) {
        out[nn--] = x + t_shift;
      } else {
        double y = h.at(nn - 1, nn - 1);
        double w = h.at(nn, nn - 1) * h.at(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t_shift;
          if (q >= 0.0) {
            z = p + (p >= 0.0 ? z : -z);
            out[nn - 1] = x + z;
            out[nn] = (z != 0.0) ? std::complex<double>(x - w / z) : std::complex<double>(x + z);
          } else {
            out[nn - 1] = std::complex<double>(x + p, z);
            out[nn] = std::complex<double>(x + p, -z);
          }
          nn -= 2;
        } else {
          if (its == max_sweeps) {
            throw ConvergenceError("eigenvalues: QR iteration did not converge");
          }
          if (its != 0 && its % 10 == 0) {  // exceptional shift
            t_shift += x;
            for (int i = 0; i <= nn; ++i) h.at(i, i) -= x;
            double s = std::abs(h.at(nn, nn - 1)) + std::abs(h.at(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0;
          for (m = nn - 2; m >= l; --m) {
            double z = h.at(m, m);
            double rr = x - z;
            double ss = y - z;
            p = (rr * ss - w) / h.at(m + 1, m) + h.at(m, m + 1);
            q = h.at(m + 1, m + 1) - z - rr - ss;
            r = h.at(m + 2, m + 1);
            double sc = std::abs(p) + std::abs(q) + std::abs(r);
            p /= sc; q /= sc; r /= sc;
            if (m == l) break;
            double u = std::abs(h.at(m, m - 1)) * (std::abs(q) + std::abs(r));
            double v = std::abs(p) * (std::abs(h.at(m - 1, m - 1)) + std::abs(z) +
                                      std::abs(h.at(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            h.at(i, i - 2) = 0.0;
            if (i != m + 2) h.at(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = h.at(k, k - 1);
              q = h.at(k + 1, k - 1);
              r = (k != nn - 1) ? h.at(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) { p /= x; q /= x; r /= x; }
            }
            double s = std::sqrt(p * p + q * q + r * r);
            if (p < 0.0) s = -s;
            if (s != 0.0) {
              if (k == m) {
                if (l != m) h.at(k, k - 1) = -h.at(k, k - 1);
              } else {
                h.at(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s; double yy = q / s; double z = r / s;
              q /= p; r /= p;
              for (int j = k; j <= nn; ++j) {
                double pp = h.at(k, j) + q * h.at(k + 1, j);
                if (k != nn - 1) {
                  pp += r * h.at(k + 2, j);
                  h.at(k + 2, j) -= pp * z;
                }
                h.at(k + 1, j) -= pp * yy;
                h.at(k, j) -= pp * x;
              }
              const int mmin = (nn < k + 3) ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                double pp = x * h.at(i, k) + yy * h.at(i, k + 1);
                if (k != nn - 1) {
                  pp += z * h.at(i, k + 2);
                  h.at(i, k + 2) -= pp * r;
                }
                h.at(i, k + 1) -= pp * q;
                h.at(i, k) -= pp;
              }
            }
          }
        }
      }
    } while (nn >= 0 && l < nn - 1);
  }
  return out;
}

// Eigenvector for a (nearly) real eigenvalue by shifted inverse iteration
// with a few random restarts; returns the vector with the smallest residual.
inline std::vector<double> real_eigenvector(const DenseMatrix<RealDomain>& a, double lambda,
                                            double* residual_out = nullptr) {
  const int n = a.rows();
  const double anorm = std::max(1.0, frobenius_norm(a));
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> best(n, 0.0);
  double best_res = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 6 && best_res > 1e-11 * anorm; ++attempt) {
    const double shift = lambda + anorm * 1e-11 * (attempt + 1);
    DenseMatrix<RealDomain> shifted = a;
    for (int i = 0; i < n; ++i) shifted.at(i, i) -= shift;
    LuFactor f = lu_factor(shifted);
    if (f.min_abs_pivot == 0.0) continue;
    DenseMatrix<RealDomain> v(n, 1, RealDomain{});
    for (int i = 0; i < n; ++i) v.at(i, 0) = unif(rng);
    for (int it = 0; it < 8; ++it) {
      v = lu_solve(f, v);
      double norm = frobenius_norm(v);
      if (norm == 0.0 || !std::isfinite(norm)) break;
      for (int i = 0; i < n; ++i) v.at(i, 0) /= norm;
      // residual of the unshifted problem
      double res = 0.0;
      for (int i = 0; i < n; ++i) {
        double acc = -lambda * v.at(i, 0);
        for (int j = 0; j < n; ++j) acc += a.at(i, j) * v.at(j, 0);
        res += acc * acc;
      }
      res = std::sqrt(res);
      if (res < best_res) {
        best_res = res;
        for (int i = 0; i < n; ++i) best[i] = v.at(i, 0);
      }
    }
  }
  if (residual_out) *residual_out = best_res;
  return best;
}

}  // namespace tcube
