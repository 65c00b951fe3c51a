#pragma once

#include <stdexcept>
#include <string>

namespace relaylink {

/// Raised by iterative solvers that exhaust their iteration budget.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when two independent quadrature routes disagree beyond tolerance.
class QuadratureFailure : public std::runtime_error {
 public:
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

// Domain violations use std::domain_error throughout.
[[noreturn]] inline void domain_fail(const std::string& what) {
  throw std::domain_error(what);
}

}  // namespace relaylink
