#include "agraph/errors.hpp"

namespace agraph {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::unknown_scope: return "unknown_scope";
    case Errc::unknown_node: return "unknown_node";
    case Errc::missing_roles: return "missing_roles";
    case Errc::incomplete_assignment: return "incomplete_assignment";
    case Errc::scope_too_large: return "scope_too_large";
    case Errc::zero_total_weight: return "zero_total_weight";
    case Errc::empty_chain: return "empty_chain";
    case Errc::invalid_chain: return "invalid_chain";
    case Errc::cannot_neutralize_junction: return "cannot_neutralize_junction";
    case Errc::cannot_reduce_neutralized: return "cannot_reduce_neutralized";
    case Errc::invalid_weight: return "invalid_weight";
    case Errc::unsupported_format: return "unsupported_format";
    case Errc::malformed_catalog: return "malformed_catalog";
    case Errc::io_error: return "io_error";
    case Errc::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace agraph
