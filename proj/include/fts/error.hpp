#pragma once

#include <stdexcept>
#include <string>

namespace fts {

/// Operands live in Hilbert spaces of different (truncated) dimension.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& what, std::size_t lhs, std::size_t rhs)
      : std::invalid_argument(what + ": incompatible spaces (dim " + std::to_string(lhs) +
                              " vs " + std::to_string(rhs) + ")") {}
};

/// A numerical invariant failed (non-negativity, contraction, eigen solver).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fts
