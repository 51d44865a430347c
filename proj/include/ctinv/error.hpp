#pragma once

#include <stdexcept>
#include <string>

namespace ctinv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument or result outside the supported numerical envelope.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A quantity sits on (or too close to) a pole of tan, cot or 1/cos.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Coincident points: repeated shifted momenta, S and T overlapping, etc.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Linear system too ill-conditioned to trust.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Channel set of the wrong parity for the requested method.
class ParityError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or inconsistent command arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctinv
