#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "tcube/error.hpp"

namespace tcube {

// Scalar domains carried by every matrix value. Real admits finite doubles
// only; Mod(m) stores the canonical representative in [0, m). Operations on
// two values require equal domains, which for Mod means equal moduli.

struct RealDomain {
  using value_type = double;
  static constexpr bool is_modular = false;

  double canon(double x) const {
    if (!std::isfinite(x)) throw DomainError("non-finite real value");
    return x;
  }
  double add(double a, double b) const { return a + b; }
  double sub(double a, double b) const { return a - b; }
  double mul(double a, double b) const { return a * b; }
  double neg(double a) const { return -a; }
  double zero() const { return 0.0; }
  double one() const { return 1.0; }

  bool operator==(const RealDomain&) const = default;
};

struct ModDomain {
  using value_type = std::int64_t;
  static constexpr bool is_modular = true;

  std::int64_t modulus = 2;

  ModDomain() = default;
  explicit ModDomain(std::int64_t m) : modulus(m) {
    if (m < 2) throw DomainError("modulus must be at least 2");
  }

  std::int64_t canon(std::int64_t x) const {
    std::int64_t r = x % modulus;
    return r < 0 ? r + modulus : r;
  }
  std::int64_t add(std::int64_t a, std::int64_t b) const { return canon(a + b); }
  std::int64_t sub(std::int64_t a, std::int64_t b) const { return canon(a - b); }
  // 128-bit intermediate: canonical operands can still overflow 64 bits for
  // large moduli.
  std::int64_t mul(std::int64_t a, std::int64_t b) const {
    return canon(static_cast<std::int64_t>((static_cast<__int128>(a) * b) % modulus));
  }
  std::int64_t neg(std::int64_t a) const { return canon(-a); }
  std::int64_t zero() const { return 0; }
  std::int64_t one() const { return canon(1); }

  bool operator==(const ModDomain&) const = default;
};

template <class D>
std::string domain_name(const D& d) {
  if constexpr (D::is_modular) {
    return "Mod(" + std::to_string(d.modulus) + ")";
  } else {
    return "Real";
  }
}

template <class D>
void require_same_domain(const D& a, const D& b, const char* where) {
  if (!(a == b)) {
    throw DomainError(std::string(where) + ": mismatched scalar domains " +
                      domain_name(a) + " vs " + domain_name(b));
  }
}

}  // namespace tcube
