#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twistfactor {

enum class ErrorCode {
  invalid_argument,
  singular_curve,
  modulus_too_large,
  not_invertible,
  budget_exhausted,
  cap_exceeded,
  dependent_rows,
  all_hypotheses_failed,
  degenerate_gcd,
  scan_budget_exhausted,
  no_divisor_in_window,
  coppersmith_exhausted,
  parse_error,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace twistfactor
