#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "agraph/graph.hpp"
#include "agraph/ratio.hpp"

namespace agraph {

enum class Outcome { success, failure };

/// One weighted step of a scope, in table column order (the order the scope
/// declared its nodes). Junctions never appear as columns.
struct ScenarioColumn {
  NodeId id;
  std::string label;
  int weight = 0;

  friend bool operator==(const ScenarioColumn&,
                         const ScenarioColumn&) = default;
};

/// A success/failure assignment over a scope's weighted steps. Failed steps
/// contribute zero weight. Admissible means every mandatory step succeeds,
/// at least one terminal succeeds (when the scope has terminals), and no
/// neutralized step is marked successful.
struct Scenario {
  std::map<NodeId, Outcome> assignment;
  std::int64_t achieved_weight = 0;
  std::int64_t total_weight = 0;
  Ratio score;  // achieved/total, reduced
  bool admissible = false;

  /// Goal-column semantics: the score when admissible, zero when the
  /// scenario cannot succeed.
  Ratio success_probability() const { return admissible ? score : Ratio(0); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Deterministically ordered set of the admissible scenarios of one scope:
/// descending score, ties broken by the S/F pattern in column order with S
/// before F.
struct ScenarioTable {
  std::string scope;
  std::vector<ScenarioColumn> columns;
  std::vector<Scenario> rows;

  /// "SSFSS"-style pattern of a row in column order.
  std::string pattern(const Scenario& row) const;

  friend bool operator==(const ScenarioTable&, const ScenarioTable&) = default;
};

/// Builds the scenario table by direct construction: free mandatory steps
/// pinned to S, neutralized steps pinned to F, soft steps free, and at
/// least one free terminal S. Caps scopes at 20 weighted steps.
ScenarioTable enumerate_scenarios(const AttackGraph& graph,
                                  const std::string& scope);

/// Independent reference: enumerates all 2^n assignments and filters by the
/// admissibility predicate evaluated directly from roles. Same output
/// contract as enumerate_scenarios; intended for cross-checking it.
ScenarioTable brute_force_oracle(const AttackGraph& graph,
                                 const std::string& scope);

/// Scores one explicit assignment, admissible or not. The assignment must
/// cover exactly the scope's weighted steps.
Scenario score_scenario(const AttackGraph& graph, const std::string& scope,
                        const std::map<NodeId, Outcome>& assignment);

enum class GoalDisplay { exact, decimal, paper };

/// Renders a probability in [0, 1] as a goal percentage.
///
/// - exact: exact value, as a terminating decimal percent or a fraction
///   ("87.5%", "100/3%")
/// - decimal: one decimal place ("87.5%")
/// - paper: integer percent, rounding halves away from zero ("88%"). The
///   sources this reproduces rounded 62.5 up but 87.5 down; this mode is
///   consistent and may differ from them by one point.
std::string goal_percentage(const Ratio& score, GoalDisplay mode);

/// Directed path from a source step to the goal. May pass through
/// junctions; the goal is always the last node.
struct Chain {
  std::vector<NodeId> nodes;

  friend bool operator==(const Chain&, const Chain&) = default;
};

/// All source-to-goal chains of a scope's active subgraph, ordered
/// lexicographically by node sequence.
std::vector<Chain> enumerate_chains(const AttackGraph& graph,
                                    const std::string& scope);

/// Sum of weighted-step weights on the chain divided by the number of
/// weighted steps; junctions and the goal are excluded from both.
Ratio chain_average_risk(const AttackGraph& graph, const Chain& chain);

struct NodeFrequency {
  NodeId id;
  /// Admissible rows (across all given tables) where the node succeeded.
  std::int64_t s_count = 0;
  /// Same count with each row weighted by the node's weight.
  std::int64_t weighted_count = 0;
  /// Scopes whose tables contain the node, sorted.
  std::vector<std::string> scopes;

  friend bool operator==(const NodeFrequency&, const NodeFrequency&) = default;
};

/// Ranks nodes by how often they must succeed across scenario tables:
/// descending s_count, ties broken by id. weighted_count is reported, not
/// ranked on.
std::vector<NodeFrequency> node_frequency(
    const std::vector<ScenarioTable>& tables);

struct CutSet {
  std::vector<NodeId> nodes;  // sorted
  bool minimal = false;

  friend bool operator==(const CutSet&, const CutSet&) = default;
};

/// All minimal node sets of size <= max_size whose neutralization empties
/// the scope's scenario table, sorted by size then lexicographically. If
/// the table is already empty, the empty set is the unique minimal cut.
/// Caps scopes at 24 weighted steps.
std::vector<CutSet> minimal_cut_sets(const AttackGraph& graph,
                                     const std::string& scope,
                                     std::size_t max_size);

}  // namespace agraph
