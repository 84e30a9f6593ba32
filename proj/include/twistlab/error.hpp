#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twistlab {

enum class ErrorCode {
  not_hermitian,
  dimension_mismatch,
  backend_mismatch,
  unsupported,
  not_finite,
  invalid_group,
  invalid_factor_set,
  invalid_action,
  not_unit_modulus,
  not_a_subgroup,
  invalid_argument,
  memory_budget_exceeded,
  degenerate_after_retries,
  not_permuting,
  parse_error,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the CLI
// maps them onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace twistlab
