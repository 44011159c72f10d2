#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "tcube/cubic.hpp"
#include "tcube/eigen.hpp"
#include "tcube/error.hpp"
#include "tcube/gamma.hpp"
#include "tcube/products.hpp"
#include "tcube/series.hpp"

namespace tcube {

// p[k] is the coefficient of degree k (constant included, unlike PowerSeries).
// Accumulates p_k * power(A, k, kind) in ascending degree. The constant term
// is realized as identity_t(n,s) and therefore needs square slices; it is the
// unit only for t-like products, so under DkStp it plays the formal role the
// extended ring assigns to it. Powers never touch the unit, which keeps
// p(x)=x exact for every kind.
template <class D>
CubicMatrix<D> poly_eval(const std::vector<typename D::value_type>& p, const CubicMatrix<D>& a,
                         ProductKind kind) {
  const Dims d = a.dims();
  const D dom = a.domain();
  auto deg = static_cast<int>(p.size()) - 1;
  while (deg >= 0 && p[static_cast<std::size_t>(deg)] == dom.canon(0)) --deg;
  if (deg < 0) return CubicMatrix<D>(d, dom);
  if (d.m != d.n && p[0] != dom.canon(0))
    throw UnsupportedError("poly_eval: nonzero constant term needs square slices");
  CubicMatrix<D> sum(d, dom);
  if (p[0] != dom.canon(0))
    sum = add(sum, scale(p[0], identity_t(d.n, d.s, dom)));
  if (deg >= 1) {
    CubicMatrix<D> pow_acc = a;
    if (p[1] != dom.canon(0)) sum = add(sum, scale(p[1], pow_acc));
    for (int k = 2; k <= deg; ++k) {
      pow_acc = product_apply(kind, pow_acc, a);
      if (p[static_cast<std::size_t>(k)] != dom.canon(0))
        sum = add(sum, scale(p[static_cast<std::size_t>(k)], pow_acc));
    }
  }
  return sum;
}

// Truncated series evaluation. Terms are accumulated in ascending degree;
// only nonzero coefficients enter the stopping test, so interleaved zeros
// (sin, cos) cannot trigger a spurious early stop.
inline CubicMatrix<RealDomain> analytic_eval(const PowerSeries& f, const CubicMatrix<RealDomain>& a,
                                             ProductKind kind, TruncationPolicy policy = {}) {
  const Dims d = a.dims();
  if (std::isfinite(f.radius) && frobenius_norm(a) >= f.radius)
    throw DomainError("analytic_eval: ||A|| outside the radius of convergence");
  CubicMatrix<RealDomain> sum(d, RealDomain{});
  if (f.constant != 0.0) {
    if (d.m != d.n)
      throw UnsupportedError("analytic_eval: nonzero constant term needs square slices");
    // For the coupled product the degree-0 element of the slice ring is the
    // stacked identity, not the t-identity.
    const CubicMatrix<RealDomain> unit = (kind == ProductKind::DkStp)
                                             ? ones_stack(d.m, d.n, d.s, RealDomain{})
                                             : identity_t(d.n, d.s, RealDomain{});
    sum = scale(f.constant, unit);
  }
  const int stored = static_cast<int>(f.coeffs.size());
  const int cap = std::min(stored, policy.max_terms);
  std::optional<CubicMatrix<RealDomain>> pow_acc;
  double last_norm = 0.0;
  bool met_atol = false;
  int k = 0;
  while (k < cap) {
    ++k;
    pow_acc = pow_acc ? product_apply(kind, *pow_acc, a) : a;
    const double c = f.coeffs[static_cast<std::size_t>(k - 1)];
    if (c == 0.0) continue;
    const CubicMatrix<RealDomain> term = scale(c, *pow_acc);
    sum = add(sum, term);
    last_norm = frobenius_norm(term);
    if (last_norm <= policy.atol) { met_atol = true; break; }
  }
  if (!met_atol) {
    for (int j = k; j < stored; ++j) {
      if (f.coeffs[static_cast<std::size_t>(j)] != 0.0)
        throw ConvergenceError("analytic_eval: term cap reached, last term norm " +
                               std::to_string(last_norm));
    }
    // all remaining coefficients vanish: the partial sum is the exact value
  }
  return sum;
}

// Extended-ring evaluation r*I + A0 with r = f(0): the identity part stays
// formal, so non-square slices are fine even for series with f(0) != 0.
inline ExtendedCubic<RealDomain> analytic_eval_extended(const PowerSeries& f,
                                                        const CubicMatrix<RealDomain>& a,
                                                        ProductKind kind,
                                                        TruncationPolicy policy = {}) {
  PowerSeries tail = f;
  tail.constant = 0.0;
  ExtendedCubic<RealDomain> out{f.constant, analytic_eval(tail, a, kind, policy)};
  return out;
}

struct SpectralResult {
  std::vector<std::complex<double>> eigenvalues;
  // aligned with eigenvalues; populated for (numerically) real ones only
  std::vector<std::optional<CubicMatrix<RealDomain>>> eigenvectors;
  std::vector<double> residuals;
  std::vector<double> charpoly;  // monic, ascending, degree ns
};

// t-eigenvalues are exactly the eigenvalues of gamma(A); a t-eigenvector for
// a real eigenvalue is a refolded eigenvector of gamma(A).
inline SpectralResult t_eigen(const CubicMatrix<RealDomain>& a) {
  const Dims d = a.dims();
  if (d.m != d.n) throw ShapeError("t_eigen: square slices required");
  const DenseMatrix<RealDomain> g = gamma(a);
  const double gnorm = frobenius_norm(g);
  SpectralResult out;
  out.eigenvalues = eigenvalues(g);
  out.eigenvectors.resize(out.eigenvalues.size());
  out.residuals.assign(out.eigenvalues.size(), 0.0);
  out.charpoly = char_poly(g);
  for (std::size_t i = 0; i < out.eigenvalues.size(); ++i) {
    if (std::abs(out.eigenvalues[i].imag()) > 1e-10) continue;
    double res = 0.0;
    std::vector<double> v = real_eigenvector(g, out.eigenvalues[i].real(), &res);
    if (res > 1e-8 * gnorm)
      throw ConvergenceError("t_eigen: eigenvector residual above threshold");
    DenseMatrix<RealDomain> col(d.n * d.s, 1, RealDomain{});
    for (int r = 0; r < d.n * d.s; ++r) col.at(r, 0) = v[static_cast<std::size_t>(r)];
    out.eigenvectors[i] = fold(col, Dims{d.n, 1, d.s});
    out.residuals[i] = res;
  }
  return out;
}

// Relative size of p_Gamma(A) evaluated through the t-product, where p_Gamma
// is the characteristic polynomial of gamma(A). Zero in exact arithmetic.
inline double cayley_hamilton_residual(const CubicMatrix<RealDomain>& a) {
  const Dims d = a.dims();
  if (d.m != d.n) throw ShapeError("cayley_hamilton_residual: square slices required");
  const std::vector<double> p = char_poly(gamma(a));
  const CubicMatrix<RealDomain> r = poly_eval<RealDomain>(p, a, ProductKind::TProduct);
  const double denom = std::max(1.0, std::pow(frobenius_norm(a), d.n * d.s));
  return frobenius_norm(r) / denom;
}

}  // namespace tcube
