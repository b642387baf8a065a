#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agraph/catalog.hpp"
#include "agraph/graph.hpp"
#include "agraph/ratio.hpp"
#include "agraph/scenario.hpp"

namespace agraph {

enum class MitigationKind { neutralize, reduce_weight };

struct MitigationAction {
  MitigationKind kind = MitigationKind::neutralize;
  NodeId target;
  int new_weight = 0;  // reduce_weight only; must be < current weight
  std::optional<std::string> source;  // catalog attack name, when applicable

  static MitigationAction neutralize_node(NodeId id);
  static MitigationAction reduce_node_weight(NodeId id, int new_weight);

  friend bool operator==(const MitigationAction&,
                         const MitigationAction&) = default;
};

/// Before/after comparison of one scope under one mitigation.
///
/// max_score_delta = max(after) - max(before) (empty table counts as 0) and
/// is never positive. mean_score_delta aligns rows by assignment — an
/// eliminated row's after-score is 0 — and is never positive for
/// neutralization; lowering a weight shrinks the denominator, so rows that
/// fail the cheapened step can score relatively higher and the mean delta
/// may be positive.
struct WhatIfResult {
  MitigationAction action;
  ScenarioTable before;
  ScenarioTable after;
  Ratio max_score_delta;
  Ratio mean_score_delta;
  std::int64_t rows_eliminated = 0;
};

/// Applies the action to the graph and re-enumerates the scope. The target
/// must be a weighted step of the scope.
WhatIfResult what_if(const AttackGraph& graph, const std::string& scope,
                     const MitigationAction& action);

struct Recommendation {
  MitigationAction action;
  std::int64_t total_rows_eliminated = 0;
  /// Most negative max_score_delta across evaluated scopes.
  Ratio min_max_score_delta;
  std::vector<std::pair<std::string, WhatIfResult>> per_scope;
  /// Catalog records whose tags intersect the target's tags, file order.
  std::vector<MitigationRecord> catalog_matches;
};

struct RecommendOutcome {
  std::vector<Recommendation> ranked;
  std::vector<std::string> warnings;
};

/// Evaluates neutralizing every free weighted node across the given scopes
/// and ranks by total rows eliminated, then most negative max_score_delta,
/// then node-frequency rank, then id. Deterministic. An empty catalog only
/// produces a warning.
RecommendOutcome recommend(const AttackGraph& graph,
                           const std::vector<std::string>& scopes,
                           const Catalog& catalog, std::size_t k);

}  // namespace agraph
