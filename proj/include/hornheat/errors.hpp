// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hornheat {

/// Bad mathematical input or a violated operation precondition.
/// The CLI maps this (like any malformed user input) to exit code 1.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed configuration text, unknown keys, or bad value syntax.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: a root bracket could not be established inside the
/// configured cap, or a residual postcondition failed after convergence.
/// Carries the last bracket endpoints and residual for diagnostics.
/// The CLI maps this to exit code 2.
class solver_error : public std::runtime_error {
 public:
  solver_error(const std::string& what, double bracket_lo, double bracket_hi,
               double residual)
      : std::runtime_error(what),
        bracket_lo_(bracket_lo),
        bracket_hi_(bracket_hi),
        residual_(residual) {}

  [[nodiscard]] double bracket_lo() const noexcept { return bracket_lo_; }
  [[nodiscard]] double bracket_hi() const noexcept { return bracket_hi_; }
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double bracket_lo_;
  double bracket_hi_;
  double residual_;
};

}  // namespace hornheat
