#pragma once

#include <stdexcept>
#include <string>

namespace agraph {

/// Stable machine-readable failure codes for analysis operations.
enum class Errc {
  unknown_scope,
  unknown_node,
  missing_roles,
  incomplete_assignment,
  scope_too_large,
  zero_total_weight,
  empty_chain,
  invalid_chain,
  cannot_neutralize_junction,
  cannot_reduce_neutralized,
  invalid_weight,
  unsupported_format,
  malformed_catalog,
  io_error,
  invalid_argument,
};

const char* errc_name(Errc code);

/// Domain error thrown by analysis operations. Carries a code so callers
/// (CLI, bindings) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace agraph
