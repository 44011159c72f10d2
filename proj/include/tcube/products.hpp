#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tcube/cubic.hpp"
#include "tcube/dense.hpp"
#include "tcube/gamma.hpp"
#include "tcube/psi.hpp"
#include "tcube/solve.hpp"

namespace tcube {

enum class ProductKind { TProduct, DkStp, TStp };

inline const char* to_string(ProductKind k) {
  switch (k) {
    case ProductKind::TProduct: return "tprod";
    case ProductKind::DkStp: return "dkstp";
    case ProductKind::TStp: return "tstp";
  }
  return "?";
}

inline ProductKind parse_product_kind(const std::string& s) {
  if (s == "tprod") return ProductKind::TProduct;
  if (s == "dkstp") return ProductKind::DkStp;
  if (s == "tstp") return ProductKind::TStp;
  throw DomainError("unknown product kind '" + s + "' (expected tprod|dkstp|tstp)");
}

// t-product, computed slice-wise: slice j of A * B is
// sum_c A^((j-c) mod s) B^(c). Identical summation order to the
// gamma-path so the two agree bit-for-bit over Real as well.
template <class D>
CubicMatrix<D> t_product(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "t_product");
  if (a.n() != b.m() || a.s() != b.s()) {
    throw ShapeError("t_product: " + to_string(a.dims()) + " with " + to_string(b.dims()));
  }
  const D& dom = a.domain();
  const int m = a.m(), n = a.n(), p = b.n(), s = a.s();
  CubicMatrix<D> r(Dims{m, p, s}, dom);
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < m; ++i) {
      for (int q = 0; q < p; ++q) {
        auto acc = dom.zero();
        for (int c = 0; c < s; ++c) {
          const int k = ((j - c) % s + s) % s;
          for (int t = 0; t < n; ++t) acc = dom.add(acc, dom.mul(a.at(i, t, k), b.at(t, q, c)));
        }
        r.at(i, q, j) = acc;
      }
    }
  }
  return r;
}

// Independent evaluation path: bcirc times unfold.
template <class D>
CubicMatrix<D> t_product_via_gamma(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "t_product");
  if (a.n() != b.m() || a.s() != b.s()) {
    throw ShapeError("t_product: " + to_string(a.dims()) + " with " + to_string(b.dims()));
  }
  return fold(gamma(a) * unfold(b), Dims{a.m(), b.n(), a.s()});
}

// DK-STP of plain matrices: A psi(n,p) B.
template <class D>
DenseMatrix<D> dkstp_mat(const DenseMatrix<D>& a, const DenseMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "dkstp_mat");
  return a * psi(a.cols(), b.rows(), a.domain()) * b;
}

// Definition-expansion path: (A (x) J^T)(B (x) J) with row/column ones
// blocks of widths t/n and t/p. Kept textually independent of dkstp_mat as a
// cross-check.
template <class D>
DenseMatrix<D> dkstp_mat_expanded(const DenseMatrix<D>& a, const DenseMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "dkstp_mat");
  const D& dom = a.domain();
  const std::int64_t t = checked_lcm(a.cols(), b.rows());
  DenseMatrix<D> left =
      kron(a, DenseMatrix<D>::ones(1, static_cast<int>(t / a.cols()), dom));
  DenseMatrix<D> right =
      kron(b, DenseMatrix<D>::ones(static_cast<int>(t / b.rows()), 1, dom));
  return left * right;
}

// Each frontal slice repeated r times consecutively; equals
// kron_cubic(A, ones(1x1xr)). The consecutive ordering follows the worked
// replication displays, which every printed numeric result depends on.
template <class D>
CubicMatrix<D> replicate_slices(const CubicMatrix<D>& a, int r) {
  if (r < 1) throw ShapeError("replicate_slices: r must be >= 1");
  CubicMatrix<D> out(Dims{a.m(), a.n(), a.s() * r}, a.domain());
  for (int k = 0; k < a.s(); ++k)
    for (int c = 0; c < r; ++c)
      for (int i = 0; i < a.m(); ++i)
        for (int j = 0; j < a.n(); ++j) out.at(i, j, k * r + c) = a.at(i, j, k);
  return out;
}

// DK-STP of cubic matrices: replicate both operands to theta = lcm(s,t)
// slices, then multiply slice-wise.
template <class D>
CubicMatrix<D> dkstp_cubic(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "dkstp_cubic");
  const std::int64_t theta64 = checked_lcm(a.s(), b.s());
  const int theta = static_cast<int>(theta64);
  CubicMatrix<D> ar = replicate_slices(a, theta / a.s());
  CubicMatrix<D> br = replicate_slices(b, theta / b.s());
  std::vector<DenseMatrix<D>> slices;
  slices.reserve(theta);
  for (int k = 0; k < theta; ++k)
    slices.push_back(dkstp_mat(frontal_slice(ar, k), frontal_slice(br, k)));
  return CubicMatrix<D>::from_slices(slices);
}

template <class D>
CubicMatrix<D> dkstp_cubic_expanded(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "dkstp_cubic");
  const int theta = static_cast<int>(checked_lcm(a.s(), b.s()));
  CubicMatrix<D> ar = replicate_slices(a, theta / a.s());
  CubicMatrix<D> br = replicate_slices(b, theta / b.s());
  std::vector<DenseMatrix<D>> slices;
  slices.reserve(theta);
  for (int k = 0; k < theta; ++k)
    slices.push_back(dkstp_mat_expanded(frontal_slice(ar, k), frontal_slice(br, k)));
  return CubicMatrix<D>::from_slices(slices);
}

// t-STP: replicate to theta slices, then circulant-convolve with the psi
// coupling: slice j = sum_c A~^((j-c) mod theta) psi B~^(c).
template <class D>
CubicMatrix<D> t_stp(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "t_stp");
  const D& dom = a.domain();
  const int theta = static_cast<int>(checked_lcm(a.s(), b.s()));
  CubicMatrix<D> ar = replicate_slices(a, theta / a.s());
  CubicMatrix<D> br = replicate_slices(b, theta / b.s());
  DenseMatrix<D> ps = psi(a.n(), b.m(), dom);
  // pre-multiply each B~ slice by psi once
  std::vector<DenseMatrix<D>> pb;
  pb.reserve(theta);
  for (int c = 0; c < theta; ++c) pb.push_back(ps * frontal_slice(br, c));
  const int m = a.m(), q = b.n();
  CubicMatrix<D> r(Dims{m, q, theta}, dom);
  for (int j = 0; j < theta; ++j) {
    for (int i = 0; i < m; ++i) {
      for (int col = 0; col < q; ++col) {
        auto acc = dom.zero();
        for (int c = 0; c < theta; ++c) {
          const int k = ((j - c) % theta + theta) % theta;
          for (int t = 0; t < a.n(); ++t)
            acc = dom.add(acc, dom.mul(ar.at(i, t, k), pb[c].at(t, col)));
        }
        r.at(i, col, j) = acc;
      }
    }
  }
  return r;
}

// Independent path: gamma(A~) (I_theta (x) psi) unfold(B~), refolded.
template <class D>
CubicMatrix<D> t_stp_via_gamma(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "t_stp");
  const D& dom = a.domain();
  const int theta = static_cast<int>(checked_lcm(a.s(), b.s()));
  CubicMatrix<D> ar = replicate_slices(a, theta / a.s());
  CubicMatrix<D> br = replicate_slices(b, theta / b.s());
  DenseMatrix<D> coupling = kron(DenseMatrix<D>::identity(theta, dom), psi(a.n(), b.m(), dom));
  // Right-associated so the accumulation order matches the direct path
  // exactly; the two paths then agree bitwise over Real as well.
  return fold(gamma(ar) * (coupling * unfold(br)), Dims{a.m(), b.n(), theta});
}

template <class D>
CubicMatrix<D> product_apply(ProductKind kind, const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  switch (kind) {
    case ProductKind::TProduct: return t_product(a, b);
    case ProductKind::DkStp: return dkstp_cubic(a, b);
    case ProductKind::TStp: return t_stp(a, b);
  }
  throw DomainError("invalid product kind");
}

// Left-associated repeated product. k = 0 is only defined where the identity
// is concrete: the t-product, or the t-STP with square slices.
template <class D>
CubicMatrix<D> power(const CubicMatrix<D>& a, int k, ProductKind kind) {
  if (k < 0) throw UnsupportedError("power: negative exponent");
  if (kind == ProductKind::TProduct && a.m() != a.n()) {
    throw ShapeError("power: t-product powers need square slices, got " + to_string(a.dims()));
  }
  if (k == 0) {
    if (kind == ProductKind::TProduct) return identity_t(a.n(), a.s(), a.domain());
    if (kind == ProductKind::TStp && a.m() == a.n()) return identity_t(a.n(), a.s(), a.domain());
    throw UnsupportedError("power: exponent 0 needs a concrete identity for kind " +
                           std::string(to_string(kind)));
  }
  CubicMatrix<D> r = a;
  for (int i = 1; i < k; ++i) r = product_apply(kind, r, a);
  return r;
}

// Lie bracket under t-STP.
template <class D>
CubicMatrix<D> bracket(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_shape(a, b, "bracket");
  return sub(t_stp(a, b), t_stp(b, a));
}

// Extended ring element r * I^s_{m x n} + a0 with the identity kept formal;
// the t-STP ring product never needs it materialized.
template <class D>
struct ExtendedCubic {
  typename D::value_type r;
  CubicMatrix<D> a0;
};

template <class D>
ExtendedCubic<D> extended_identity(Dims d, D dom) {
  return ExtendedCubic<D>{dom.one(), CubicMatrix<D>(d, dom)};
}

template <class D>
ExtendedCubic<D> extended_from_cubic(const CubicMatrix<D>& a) {
  return ExtendedCubic<D>{a.domain().zero(), a};
}

template <class D>
ExtendedCubic<D> extended_add(const ExtendedCubic<D>& x, const ExtendedCubic<D>& y) {
  require_same_shape(x.a0, y.a0, "extended_add");
  return ExtendedCubic<D>{x.a0.domain().add(x.r, y.r), add(x.a0, y.a0)};
}

template <class D>
ExtendedCubic<D> extended_mul(const ExtendedCubic<D>& x, const ExtendedCubic<D>& y) {
  require_same_shape(x.a0, y.a0, "extended_mul");
  const D& dom = x.a0.domain();
  CubicMatrix<D> a0 = add(add(scale(x.r, y.a0), scale(y.r, x.a0)), t_stp(x.a0, y.a0));
  return ExtendedCubic<D>{dom.mul(x.r, y.r), a0};
}

// Materialization requires the concrete identity, hence square slices.
template <class D>
CubicMatrix<D> extended_materialize(const ExtendedCubic<D>& x) {
  if (x.a0.m() != x.a0.n()) {
    throw UnsupportedError("extended_materialize: formal identity I^s_{" +
                           std::to_string(x.a0.m()) + "x" + std::to_string(x.a0.n()) +
                           "} cannot be realized");
  }
  return add(scale(x.r, identity_t(x.a0.n(), x.a0.s(), x.a0.domain())), x.a0);
}

// Action of an extended element on a concrete cubic: (rI + A0) o x, where o
// is the given product; the formal identity acts as the scalar r.
template <class D>
CubicMatrix<D> extended_apply(const ExtendedCubic<D>& x, const CubicMatrix<D>& v,
                              ProductKind kind) {
  return add(scale(x.r, v), product_apply(kind, x.a0, v));
}

// Extended DK ring over plain matrices, same shape of construction.
template <class D>
struct ExtendedMatrix {
  typename D::value_type r;
  DenseMatrix<D> a0;
};

template <class D>
ExtendedMatrix<D> extended_mul(const ExtendedMatrix<D>& x, const ExtendedMatrix<D>& y) {
  require_same_shape(x.a0, y.a0, "extended_mul");
  const D& dom = x.a0.domain();
  DenseMatrix<D> a0 = add(add(scale(x.r, y.a0), scale(y.r, x.a0)), dkstp_mat(x.a0, y.a0));
  return ExtendedMatrix<D>{dom.mul(x.r, y.r), a0};
}

template <class D>
ExtendedMatrix<D> extended_add(const ExtendedMatrix<D>& x, const ExtendedMatrix<D>& y) {
  require_same_shape(x.a0, y.a0, "extended_add");
  return ExtendedMatrix<D>{x.a0.domain().add(x.r, y.r), add(x.a0, y.a0)};
}

// Invertibility under t-STP is invertibility of gamma(A); the inverse of a
// block circulant is block circulant, so refolding the dense inverse is
// sound. Non-square slices are out of scope (the source defers them).
inline bool is_invertible_tstp(const CubicMatrix<RealDomain>& a) {
  if (a.m() != a.n()) throw UnsupportedError("is_invertible_tstp: slices must be square");
  DenseMatrix<RealDomain> g = gamma(a);
  LuFactor f = lu_factor(g);
  return f.min_abs_pivot > 1e-12 * std::max(1.0, frobenius_norm(g));
}

inline CubicMatrix<RealDomain> inverse_tstp(const CubicMatrix<RealDomain>& a) {
  if (a.m() != a.n()) throw UnsupportedError("inverse_tstp: slices must be square");
  DenseMatrix<RealDomain> g = gamma(a);
  LuFactor f = lu_factor(g);
  if (f.min_abs_pivot <= 1e-12 * std::max(1.0, frobenius_norm(g))) {
    throw SingularError("inverse_tstp: gamma(A) is singular");
  }
  DenseMatrix<RealDomain> gi =
      lu_solve(f, DenseMatrix<RealDomain>::identity(g.rows(), RealDomain{}));
  return gamma_inverse(gi, a.dims());
}

inline bool is_invertible_tstp(const CubicMatrix<ModDomain>& a) {
  if (a.m() != a.n()) throw UnsupportedError("is_invertible_tstp: slices must be square");
  const std::int64_t m = a.domain().modulus;
  __int128 det = det_int_bareiss(gamma(a));
  std::int64_t dm = a.domain().canon(static_cast<std::int64_t>(det % m));
  return std::gcd(dm, m) == 1;
}

inline CubicMatrix<ModDomain> inverse_tstp(const CubicMatrix<ModDomain>& a) {
  if (a.m() != a.n()) throw UnsupportedError("inverse_tstp: slices must be square");
  const ModDomain dom = a.domain();
  DenseMatrix<ModDomain> g = gamma(a);
  __int128 det = det_int_bareiss(g);
  std::int64_t dm = dom.canon(static_cast<std::int64_t>(det % dom.modulus));
  if (std::gcd(dm, dom.modulus) != 1) {
    throw SingularError("inverse_tstp: det gamma(A) = " + std::to_string(dm) +
                        " is not a unit mod " + std::to_string(dom.modulus));
  }
  DenseMatrix<ModDomain> gi = scale(inverse_mod(dm, dom.modulus), adjugate_mod(g));
  return gamma_inverse(gi, a.dims(), /*strict=*/true);
}

// Squaring operator: M (x) E_{t/m x t/n} with E the normalized all-ones
// block, E_{a x b} = J_{a x b} / sqrt(ab).
inline DenseMatrix<RealDomain> box_square(const DenseMatrix<RealDomain>& m) {
  const std::int64_t t = checked_lcm(m.rows(), m.cols());
  const int a = static_cast<int>(t / m.rows()), b = static_cast<int>(t / m.cols());
  DenseMatrix<RealDomain> e =
      scale(1.0 / std::sqrt(static_cast<double>(a) * b),
            DenseMatrix<RealDomain>::ones(a, b, RealDomain{}));
  return kron(m, e);
}

inline DenseMatrix<RealDomain> pi_map(const CubicMatrix<RealDomain>& a) {
  return box_square(gamma(a));
}

}  // namespace tcube
