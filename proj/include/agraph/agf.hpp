#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agraph/graph.hpp"

namespace agraph {

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  int line = 0;    // 1-based; 0 when the position is not line-specific
  int column = 0;  // 1-based; 0 when unknown
  std::string code;
  std::string message;
};

struct ParseResult {
  std::optional<AttackGraph> graph;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return graph.has_value(); }
  bool has_errors() const;
};

/// Parses the line-oriented `.agf` graph format:
///
///   #agf 1
///   goal <id> "<label>"
///   node <id> "<label>" weight=<int> [role=<r>] [tags=<a,b>] [status=blocked]
///   edge <from> -> <to>
///   gate <id> <and|or>
///   scope <name> = <id>,<id>,...
///
/// `#` starts a comment; the optional `#agf <version>` first line pins the
/// format version. Returns either a validated graph (possibly with
/// warnings) or the full list of diagnostics with line/column positions.
/// Never throws on malformed input.
ParseResult parse_agf(std::string_view text);

ParseResult parse_agf_file(const std::string& path);

/// Canonical form: version header, goal, nodes sorted by id, edges sorted,
/// gates sorted, scopes sorted by name (node lists keep declared order).
/// Byte-stable, and parse_agf(emit_agf(g)) reproduces g exactly.
std::string emit_agf(const AttackGraph& graph);

}  // namespace agraph
