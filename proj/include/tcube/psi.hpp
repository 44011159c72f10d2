#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "tcube/dense.hpp"
#include "tcube/domain.hpp"
#include "tcube/error.hpp"

namespace tcube {

// lcm in 64-bit with overflow detection; dimension products beyond 2^63
// raise instead of wrapping.
inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  if (a < 1 || b < 1) throw ShapeError("lcm arguments must be positive");
  std::int64_t g = std::gcd(a, b);
  std::int64_t q = a / g;
  if (q > INT64_MAX / b) throw OverflowError("lcm overflow");
  return q * b;
}

// Psi_{n x p} couples an n-block row split and a p-block column split of
// [1, t], t = lcm(n,p): entry (i,j) is the overlap length of the i-th length
// t/n interval and the j-th length t/p interval. Row sums are t/n, column
// sums t/p, and Psi_{n x n} = I_n.
inline std::vector<std::int64_t> psi_entries(int n, int p) {
  const std::int64_t t = checked_lcm(n, p);
  const std::int64_t a = t / n, b = t / p;
  std::vector<std::int64_t> e(static_cast<std::size_t>(n) * p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      const std::int64_t lo = std::max(a * i, b * j);
      const std::int64_t hi = std::min(a * (i + 1), b * (j + 1));
      e[static_cast<std::size_t>(i) * p + j] = hi > lo ? hi - lo : 0;
    }
  }
  return e;
}

template <class D>
DenseMatrix<D> psi(int n, int p, D dom) {
  auto e = psi_entries(n, p);
  std::vector<typename D::value_type> data(e.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    data[i] = dom.canon(static_cast<typename D::value_type>(e[i]));
  return DenseMatrix<D>(n, p, dom, std::move(data));
}

inline DenseMatrix<RealDomain> psi(int n, int p) { return psi(n, p, RealDomain{}); }

}  // namespace tcube
