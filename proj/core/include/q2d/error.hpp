#pragma once

#include <stdexcept>
#include <string>

namespace q2d {

/// Base of every error the library raises.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was violated (bad length, non-confining trap, ...).
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// An iterative method stopped without meeting its tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string &what, int iterations)
      : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

private:
  int iterations_;
};

} // namespace q2d
