#pragma once

#include <stdexcept>
#include <string>

namespace tcube {

// Error taxonomy. The CLI maps these onto its exit-code contract:
// ShapeError/DomainError/RangeError/UnsupportedError/OverflowError -> 3,
// SingularError/ConvergenceError -> 4. Usage errors never reach the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };
struct SingularError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };

}  // namespace tcube
