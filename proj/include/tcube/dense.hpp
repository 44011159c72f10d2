#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tcube/domain.hpp"
#include "tcube/error.hpp"

namespace tcube {

// Row-major dense matrix over a scalar domain. Values are treated as
// immutable once an operation returns them; mutation is only used while a
// result is being assembled.
template <class D>
class DenseMatrix {
 public:
  using value_type = typename D::value_type;

  DenseMatrix() = default;

  DenseMatrix(int rows, int cols, D dom)
      : rows_(rows), cols_(cols), dom_(std::move(dom)),
        data_(static_cast<std::size_t>(check_shape(rows, cols)), dom_.zero()) {}

  DenseMatrix(int rows, int cols, D dom, std::vector<value_type> data)
      : rows_(rows), cols_(cols), dom_(std::move(dom)), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(check_shape(rows, cols))) {
      throw ShapeError("DenseMatrix: data length " + std::to_string(data_.size()) +
                       " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    for (auto& v : data_) v = dom_.canon(v);
  }

  static DenseMatrix identity(int n, D dom) {
    DenseMatrix r(n, n, dom);
    for (int i = 0; i < n; ++i) r.at(i, i) = r.dom_.one();
    return r;
  }

  // Ones on the main diagonal, zero elsewhere; the DK identity surrogate
  // I_{m x n} for rectangular shapes.
  static DenseMatrix rect_identity(int rows, int cols, D dom) {
    DenseMatrix r(rows, cols, dom);
    for (int i = 0; i < std::min(rows, cols); ++i) r.at(i, i) = r.dom_.one();
    return r;
  }

  static DenseMatrix ones(int rows, int cols, D dom) {
    DenseMatrix r(rows, cols, dom);
    for (auto& v : r.data_) v = r.dom_.one();
    return r;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const D& domain() const { return dom_; }

  value_type& at(int i, int j) { return data_[index(i, j)]; }
  value_type at(int i, int j) const { return data_[index(i, j)]; }

  const std::vector<value_type>& data() const { return data_; }
  std::vector<value_type>& mutable_data() { return data_; }

  DenseMatrix block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || nr < 1 || nc < 1 || r0 + nr > rows_ || c0 + nc > cols_) {
      throw RangeError("DenseMatrix::block out of range");
    }
    DenseMatrix out(nr, nc, dom_);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) out.at(i, j) = at(r0 + i, c0 + j);
    return out;
  }

  void paste(int r0, int c0, const DenseMatrix& src) {
    if (r0 < 0 || c0 < 0 || r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_) {
      throw RangeError("DenseMatrix::paste out of range");
    }
    for (int i = 0; i < src.rows_; ++i)
      for (int j = 0; j < src.cols_; ++j) at(r0 + i, c0 + j) = src.at(i, j);
  }

  bool operator==(const DenseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && dom_ == o.dom_ && data_ == o.data_;
  }

 private:
  static long long check_shape(int rows, int cols) {
    if (rows < 1 || cols < 1) throw ShapeError("DenseMatrix: dimensions must be positive");
    return static_cast<long long>(rows) * cols;
  }
  std::size_t index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
      throw RangeError("DenseMatrix index (" + std::to_string(i) + "," + std::to_string(j) +
                       ") out of " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    return static_cast<std::size_t>(i) * cols_ + j;
  }

  int rows_ = 0;
  int cols_ = 0;
  D dom_{};
  std::vector<value_type> data_;
};

template <class D>
void require_same_shape(const DenseMatrix<D>& a, const DenseMatrix<D>& b, const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(where) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
  require_same_domain(a.domain(), b.domain(), where);
}

template <class D>
DenseMatrix<D> add(const DenseMatrix<D>& a, const DenseMatrix<D>& b) {
  require_same_shape(a, b, "add");
  DenseMatrix<D> r(a.rows(), a.cols(), a.domain());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.domain().add(a.at(i, j), b.at(i, j));
  return r;
}

template <class D>
DenseMatrix<D> sub(const DenseMatrix<D>& a, const DenseMatrix<D>& b) {
  require_same_shape(a, b, "sub");
  DenseMatrix<D> r(a.rows(), a.cols(), a.domain());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.domain().sub(a.at(i, j), b.at(i, j));
  return r;
}

template <class D>
DenseMatrix<D> scale(typename D::value_type c, const DenseMatrix<D>& a) {
  DenseMatrix<D> r(a.rows(), a.cols(), a.domain());
  c = a.domain().canon(c);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.domain().mul(c, a.at(i, j));
  return r;
}

template <class D>
DenseMatrix<D> neg(const DenseMatrix<D>& a) {
  DenseMatrix<D> r(a.rows(), a.cols(), a.domain());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.domain().neg(a.at(i, j));
  return r;
}

// Fixed accumulation order (inner index ascending) so that independently
// coded evaluation paths produce bit-identical sums.
template <class D>
DenseMatrix<D> matmul(const DenseMatrix<D>& a, const DenseMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "matmul");
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()));
  }
  const D& dom = a.domain();
  DenseMatrix<D> r(a.rows(), b.cols(), dom);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      auto acc = dom.zero();
      for (int k = 0; k < a.cols(); ++k) acc = dom.add(acc, dom.mul(a.at(i, k), b.at(k, j)));
      r.at(i, j) = acc;
    }
  }
  return r;
}

template <class D>
DenseMatrix<D> operator*(const DenseMatrix<D>& a, const DenseMatrix<D>& b) {
  return matmul(a, b);
}

template <class D>
DenseMatrix<D> transpose(const DenseMatrix<D>& a) {
  DenseMatrix<D> r(a.cols(), a.rows(), a.domain());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(j, i) = a.at(i, j);
  return r;
}

template <class D>
DenseMatrix<D> kron(const DenseMatrix<D>& a, const DenseMatrix<D>& b) {
  require_same_domain(a.domain(), b.domain(), "kron");
  const D& dom = a.domain();
  DenseMatrix<D> r(a.rows() * b.rows(), a.cols() * b.cols(), dom);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q)
          r.at(i * b.rows() + p, j * b.cols() + q) = dom.mul(a.at(i, j), b.at(p, q));
  return r;
}

template <class D>
bool is_zero(const DenseMatrix<D>& a) {
  for (const auto& v : a.data())
    if (v != a.domain().zero()) return false;
  return true;
}

inline double frobenius_norm(const DenseMatrix<RealDomain>& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += v * v;
  return std::sqrt(acc);
}

inline double max_abs_diff(const DenseMatrix<RealDomain>& a, const DenseMatrix<RealDomain>& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace tcube
