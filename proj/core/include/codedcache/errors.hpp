#pragma once

#include <stdexcept>

namespace codedcache {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value. The message names the field.
struct ParameterError : Error {
  using Error::Error;
};

/// A caching distribution that cannot be realized (some q_i * M > 1).
struct FeasibilityError : Error {
  using Error::Error;
};

/// Instance too large for an enumeration-based code path.
struct CapacityError : Error {
  using Error::Error;
};

/// Numeric degeneracy: vanished probability mass, divergent series, bad constants.
struct DegeneracyError : Error {
  using Error::Error;
};

/// Input violates a hypothesis a bound needs (non-co-monotone p and q).
struct HypothesisError : Error {
  using Error::Error;
};

}  // namespace codedcache
