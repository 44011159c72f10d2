#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tcube/error.hpp"

namespace tcube {

// Formal power series f(x) = constant + sum_{k>=1} coeffs[k-1] * x^k.
// coeffs[i] is the coefficient of degree i+1; the degree-0 term lives in
// `constant`. `radius` is the radius of convergence (infinity if entire).
struct PowerSeries {
  std::string name;
  double constant = 0.0;
  std::vector<double> coeffs;
  double radius = std::numeric_limits<double>::infinity();
};

struct TruncationPolicy {
  double atol = 1e-14;
  int max_terms = 128;
};

// Builders for the named series. Generated tails are deliberately longer than
// the default term cap so that evaluation can tell "cap truncated a genuine
// tail" apart from "polynomial ended".
inline PowerSeries named_series(const std::string& name, double alpha = 0.0, int length = 192) {
  if (length < 1) throw RangeError("named_series: length must be positive");
  PowerSeries f;
  f.name = name;
  f.coeffs.assign(static_cast<std::size_t>(length), 0.0);
  if (name == "exp") {
    f.constant = 1.0;
    double c = 1.0;
    for (int k = 1; k <= length; ++k) { c /= k; f.coeffs[k - 1] = c; }
  } else if (name == "sin" || name == "sinh") {
    f.constant = 0.0;
    double c = 1.0;
    int sign = 1;
    for (int k = 1; k <= length; ++k) {
      c /= k;
      if (k % 2 == 1) {
        f.coeffs[k - 1] = (name == "sin" ? sign : 1) * c;
        sign = -sign;
      }
    }
  } else if (name == "cos" || name == "cosh") {
    f.constant = 1.0;
    double c = 1.0;
    int sign = -1;
    for (int k = 1; k <= length; ++k) {
      c /= k;
      if (k % 2 == 0) {
        f.coeffs[k - 1] = (name == "cos" ? sign : 1) * c;
        sign = -sign;
      }
    }
  } else if (name == "log1p") {
    // log(1+x) = x - x^2/2 + x^3/3 - ...
    f.constant = 0.0;
    f.radius = 1.0;
    for (int k = 1; k <= length; ++k) f.coeffs[k - 1] = (k % 2 == 1 ? 1.0 : -1.0) / k;
  } else if (name == "binomial") {
    // (1+x)^alpha; the generalized binomial coefficients terminate when alpha
    // is a nonnegative integer.
    f.constant = 1.0;
    f.radius = 1.0;
    double c = 1.0;
    for (int k = 1; k <= length; ++k) {
      c *= (alpha - (k - 1)) / k;
      f.coeffs[k - 1] = c;
    }
  } else {
    throw RangeError("named_series: unknown series '" + name + "'");
  }
  return f;
}

}  // namespace tcube
