#pragma once

#include <stdexcept>
#include <string>

namespace starsolve {

/// Operand shapes do not conform.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Operands carry different involution tags, or a transpose-involution
/// matrix holds non-real entries.
class InvolutionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An element has no Moore-Penrose inverse (or one could not be computed).
class NotMpInvertible : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace starsolve
