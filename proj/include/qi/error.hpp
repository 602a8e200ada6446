#pragma once

#include <stdexcept>
#include <string>

namespace qi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad dimension, out-of-range
/// probability, malformed spectrum, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine failed to reach its tolerance.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation that needs a common eigenbasis receives a
/// non-commuting pair of states.
class NonCommutingStates : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

inline void requireProbability(double p, const char* name) {
  require(p >= 0.0 && p <= 1.0, std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
}

}  // namespace detail
}  // namespace qi
