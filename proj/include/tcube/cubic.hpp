#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tcube/dense.hpp"
#include "tcube/domain.hpp"
#include "tcube/error.hpp"

namespace tcube {

struct Dims {
  int m = 1, n = 1, s = 1;
  bool operator==(const Dims&) const = default;
};

inline std::string to_string(const Dims& d) {
  return std::to_string(d.m) + "x" + std::to_string(d.n) + "x" + std::to_string(d.s);
}

// Cubic matrix A in R^{m x n x s} (or Z_m^{m x n x s}): s frontal slices of
// shape m x n. Storage is slice-major with row-major slices, which makes the
// flat data array literally the unfold (the sm x n stack of frontal slices).
// All indices in the API are 0-based.
template <class D>
class CubicMatrix {
 public:
  using value_type = typename D::value_type;

  CubicMatrix() = default;

  CubicMatrix(Dims d, D dom)
      : dims_(check_dims(d)), dom_(std::move(dom)),
        data_(static_cast<std::size_t>(d.m) * d.n * d.s, dom_.zero()) {}

  CubicMatrix(Dims d, D dom, std::vector<value_type> data)
      : dims_(check_dims(d)), dom_(std::move(dom)), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(d.m) * d.n * d.s) {
      throw ShapeError("CubicMatrix: data length " + std::to_string(data_.size()) +
                       " does not match dims " + to_string(d));
    }
    for (auto& v : data_) v = dom_.canon(v);
  }

  static CubicMatrix from_slices(const std::vector<DenseMatrix<D>>& slices) {
    if (slices.empty()) throw ShapeError("from_slices: need at least one slice");
    const int m = slices[0].rows(), n = slices[0].cols();
    CubicMatrix r(Dims{m, n, static_cast<int>(slices.size())}, slices[0].domain());
    for (std::size_t k = 0; k < slices.size(); ++k) {
      if (slices[k].rows() != m || slices[k].cols() != n) {
        throw ShapeError("from_slices: slice " + std::to_string(k) + " has mismatched shape");
      }
      require_same_domain(slices[k].domain(), r.dom_, "from_slices");
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j, static_cast<int>(k)) = slices[k].at(i, j);
    }
    return r;
  }

  const Dims& dims() const { return dims_; }
  int m() const { return dims_.m; }
  int n() const { return dims_.n; }
  int s() const { return dims_.s; }
  const D& domain() const { return dom_; }

  value_type& at(int i, int j, int k) { return data_[index(i, j, k)]; }
  value_type at(int i, int j, int k) const { return data_[index(i, j, k)]; }

  const std::vector<value_type>& data() const { return data_; }

  bool operator==(const CubicMatrix& o) const {
    return dims_ == o.dims_ && dom_ == o.dom_ && data_ == o.data_;
  }

 private:
  static Dims check_dims(const Dims& d) {
    if (d.m < 1 || d.n < 1 || d.s < 1) throw ShapeError("CubicMatrix: dims must be positive");
    return d;
  }
  std::size_t index(int i, int j, int k) const {
    if (i < 0 || i >= dims_.m || j < 0 || j >= dims_.n || k < 0 || k >= dims_.s) {
      throw RangeError("CubicMatrix index (" + std::to_string(i) + "," + std::to_string(j) +
                       "," + std::to_string(k) + ") out of " + to_string(dims_));
    }
    return (static_cast<std::size_t>(k) * dims_.m + i) * dims_.n + j;
  }

  Dims dims_{};
  D dom_{};
  std::vector<value_type> data_;
};

// unfold(A) is the sm x n stack of frontal slices; the storage layout makes
// this a copy of the flat data.
template <class D>
DenseMatrix<D> unfold(const CubicMatrix<D>& a) {
  return DenseMatrix<D>(a.s() * a.m(), a.n(), a.domain(), a.data());
}

template <class D>
CubicMatrix<D> fold(const DenseMatrix<D>& u, const Dims& d) {
  if (u.rows() != d.s * d.m || u.cols() != d.n) {
    throw ShapeError("fold: matrix " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                     " does not unfold to dims " + to_string(d));
  }
  return CubicMatrix<D>(d, u.domain(), u.data());
}

template <class D>
DenseMatrix<D> frontal_slice(const CubicMatrix<D>& a, int k) {
  if (k < 0 || k >= a.s()) throw RangeError("frontal_slice: index " + std::to_string(k));
  DenseMatrix<D> r(a.m(), a.n(), a.domain());
  for (int i = 0; i < a.m(); ++i)
    for (int j = 0; j < a.n(); ++j) r.at(i, j) = a.at(i, j, k);
  return r;
}

// Horizontal slice i is the n x s matrix of a_{i,.,.}; lateral slice j is the
// s x m matrix with entry (k,i) = a_{i,j,k}. Index roles follow the frontal
// slice picture, not a flattening convention.
template <class D>
DenseMatrix<D> horizontal_slice(const CubicMatrix<D>& a, int i) {
  if (i < 0 || i >= a.m()) throw RangeError("horizontal_slice: index " + std::to_string(i));
  DenseMatrix<D> r(a.n(), a.s(), a.domain());
  for (int j = 0; j < a.n(); ++j)
    for (int k = 0; k < a.s(); ++k) r.at(j, k) = a.at(i, j, k);
  return r;
}

template <class D>
DenseMatrix<D> lateral_slice(const CubicMatrix<D>& a, int j) {
  if (j < 0 || j >= a.n()) throw RangeError("lateral_slice: index " + std::to_string(j));
  DenseMatrix<D> r(a.s(), a.m(), a.domain());
  for (int k = 0; k < a.s(); ++k)
    for (int i = 0; i < a.m(); ++i) r.at(k, i) = a.at(i, j, k);
  return r;
}

// Slice-wise transpose: slice k of the result is (A^(k))^T. Only the
// (i,j)-swap transpose is defined concretely.
template <class D>
CubicMatrix<D> transpose(const CubicMatrix<D>& a) {
  CubicMatrix<D> r(Dims{a.n(), a.m(), a.s()}, a.domain());
  for (int k = 0; k < a.s(); ++k)
    for (int i = 0; i < a.m(); ++i)
      for (int j = 0; j < a.n(); ++j) r.at(j, i, k) = a.at(i, j, k);
  return r;
}

template <class D>
void require_same_shape(const CubicMatrix<D>& a, const CubicMatrix<D>& b, const char* where) {
  if (!(a.dims() == b.dims())) {
    throw ShapeError(std::string(where) + ": dims " + to_string(a.dims()) + " vs " +
                     to_string(b.dims()));
  }
  require_same_domain(a.domain(), b.domain(), where);
}

template <class D>
CubicMatrix<D> add(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_shape(a, b, "add");
  CubicMatrix<D> r(a.dims(), a.domain());
  for (int k = 0; k < a.s(); ++k)
    for (int i = 0; i < a.m(); ++i)
      for (int j = 0; j < a.n(); ++j) r.at(i, j, k) = a.domain().add(a.at(i, j, k), b.at(i, j, k));
  return r;
}

template <class D>
CubicMatrix<D> sub(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_shape(a, b, "sub");
  CubicMatrix<D> r(a.dims(), a.domain());
  for (int k = 0; k < a.s(); ++k)
    for (int i = 0; i < a.m(); ++i)
      for (int j = 0; j < a.n(); ++j) r.at(i, j, k) = a.domain().sub(a.at(i, j, k), b.at(i, j, k));
  return r;
}

template <class D>
CubicMatrix<D> scale(typename D::value_type c, const CubicMatrix<D>& a) {
  CubicMatrix<D> r(a.dims(), a.domain());
  c = a.domain().canon(c);
  for (int k = 0; k < a.s(); ++k)
    for (int i = 0; i < a.m(); ++i)
      for (int j = 0; j < a.n(); ++j) r.at(i, j, k) = a.domain().mul(c, a.at(i, j, k));
  return r;
}

template <class D>
CubicMatrix<D> neg(const CubicMatrix<D>& a) {
  CubicMatrix<D> r(a.dims(), a.domain());
  for (int k = 0; k < a.s(); ++k)
    for (int i = 0; i < a.m(); ++i)
      for (int j = 0; j < a.n(); ++j) r.at(i, j, k) = a.domain().neg(a.at(i, j, k));
  return r;
}

// Kronecker product of cubic matrices: slices ordered with the outer loop
// over A's slices, so slice i*t + j is A^(i) (x) B^(j).
template <class D>
CubicMatrix<D> kron_cubic(const CubicMatrix<D>& a, const CubicMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "kron_cubic");
  std::vector<DenseMatrix<D>> slices;
  slices.reserve(static_cast<std::size_t>(a.s()) * b.s());
  for (int i = 0; i < a.s(); ++i) {
    DenseMatrix<D> ai = frontal_slice(a, i);
    for (int j = 0; j < b.s(); ++j) slices.push_back(kron(ai, frontal_slice(b, j)));
  }
  return CubicMatrix<D>::from_slices(slices);
}

template <class D>
bool is_zero(const CubicMatrix<D>& a) {
  for (const auto& v : a.data())
    if (v != a.domain().zero()) return false;
  return true;
}

inline double frobenius_norm(const CubicMatrix<RealDomain>& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += v * v;
  return std::sqrt(acc);
}

inline double max_abs_diff(const CubicMatrix<RealDomain>& a, const CubicMatrix<RealDomain>& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// t-product identity: first slice I_n, remaining slices zero.
template <class D>
CubicMatrix<D> identity_t(int n, int s, D dom) {
  CubicMatrix<D> r(Dims{n, n, s}, dom);
  for (int i = 0; i < n; ++i) r.at(i, i, 0) = dom.one();
  return r;
}

inline CubicMatrix<RealDomain> identity_t(int n, int s) {
  return identity_t(n, s, RealDomain{});
}

// I^s_{m x n} is concrete only when m = n (where it coincides with
// identity_t); the rectangular identity exists only as the formal unit of the
// extended ring.
template <class D>
CubicMatrix<D> identity_rect(int m, int n, int s, D dom) {
  if (m != n) {
    throw UnsupportedError("identity_rect: I^s_{" + std::to_string(m) + "x" + std::to_string(n) +
                           "} has no concrete realization; use the extended ring");
  }
  return identity_t(n, s, dom);
}

// J^s_{m x n}: s stacked copies of the rectangular diagonal-ones matrix.
template <class D>
CubicMatrix<D> ones_stack(int m, int n, int s, D dom) {
  std::vector<DenseMatrix<D>> slices(static_cast<std::size_t>(s),
                                     DenseMatrix<D>::rect_identity(m, n, dom));
  return CubicMatrix<D>::from_slices(slices);
}

}  // namespace tcube
