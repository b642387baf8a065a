#pragma once

#include <optional>
#include <string>

#include "agraph/graph.hpp"

namespace agraph {

struct DotOptions {
  /// Restrict the drawing to one scope's active subgraph.
  std::optional<std::string> scope;
};

/// Graphviz rendering: the goal is the sink, junctions are drawn as small
/// labeled gate points, step labels show `label (w=N)`, and roles are
/// color-coded. Output is deterministic.
std::string export_dot(const AttackGraph& graph, const DotOptions& options = {});

}  // namespace agraph
