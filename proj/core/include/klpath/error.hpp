#pragma once

#include <stdexcept>

namespace klpath {

/// Malformed input: composite or even p, a modulus that does not fit in 64
/// bits, a non-unit residue, an index or time outside its range.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The arguments are well formed but a hypothesis of the underlying estimate
/// is not met (for example the short-sum corollaries need n >= 31).
class HypothesisViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace klpath
