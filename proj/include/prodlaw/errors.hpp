#pragma once

#include <stdexcept>
#include <string>

namespace prodlaw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input (negative radius, bad grid, contour too close to a pole...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical self-check failed: refinement levels disagree, a truncated
/// tail is too large, or cancellation ate the requested accuracy.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// LAPACK reported a failure.
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace prodlaw
