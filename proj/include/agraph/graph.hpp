#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace agraph {

/// Graph-local node identifier. Tokens are non-empty and restricted to
/// lowercase `[a-z0-9_]`; display names live in StepNode::label.
struct NodeId {
  std::string token;

  NodeId() = default;
  explicit NodeId(std::string t) : token(std::move(t)) {}

  static bool valid_token(const std::string& t);

  auto operator<=>(const NodeId&) const = default;
};

/// How a step participates in scenario admissibility.
///
/// - mandatory: failure zeroes the attack (all must succeed)
/// - soft: failure degrades the score but does not block the attack
/// - terminal: finishing step adjacent to the goal; at least one must succeed
/// - junction: weight-0 structural gate node, never scored
enum class Role { mandatory, soft, terminal, junction };

enum class GateKind { and_gate, or_gate };

const char* role_name(Role role);
const char* gate_name(GateKind gate);
std::optional<Role> role_from_name(const std::string& name);
std::optional<GateKind> gate_from_name(const std::string& name);

struct StepNode {
  NodeId id;
  std::string label;
  int weight = 0;
  std::optional<Role> role;
  std::vector<std::string> tags;  // kept sorted and unique
  /// Neutralization mark: the step is pinned to failure in every scenario.
  /// Structure and weights are untouched so before/after tables align.
  bool forced_fail = false;

  bool is_junction() const { return role == Role::junction; }

  friend bool operator==(const StepNode&, const StepNode&) = default;
};

struct Edge {
  NodeId from;
  NodeId to;

  auto operator<=>(const Edge&) const = default;
};

/// Unvalidated graph input, as read from a file or assembled by a caller.
/// Scope node lists keep their declared order; that order is the column
/// order of rendered scenario tables.
struct GraphDefinition {
  NodeId goal_id;
  std::string goal_label;
  std::vector<StepNode> steps;
  std::vector<Edge> edges;
  std::vector<std::pair<NodeId, GateKind>> gates;
  std::vector<std::pair<std::string, std::vector<NodeId>>> scopes;
};

enum class ViolationCode {
  invalid_identifier,
  duplicate_id,
  unknown_node,
  negative_weight,
  goal_has_weight,
  goal_has_outgoing_edge,
  cycle_detected,
  unreachable_node,
  missing_gate,
  duplicate_gate,
  junction_has_weight,
  terminal_not_adjacent_to_goal,
  duplicate_edge,
  duplicate_scope,
  duplicate_scope_entry,
};

const char* violation_code_name(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;        // names the nodes/edges involved
  std::vector<NodeId> nodes;  // primary nodes involved, for diagnostics

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks every graph invariant and returns the full list of violations.
/// An empty result means the definition is a valid attack graph.
std::vector<Violation> validate(const GraphDefinition& def);

class ValidationFailure : public std::runtime_error {
 public:
  explicit ValidationFailure(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Immutable, validated attack graph: a DAG of weighted step nodes with one
/// goal sink, AND/OR gates on multi-predecessor nodes, and named attack
/// scopes. Transforms return new graphs; values are safe to share across
/// threads.
class AttackGraph {
 public:
  /// Validates and freezes a definition. Throws ValidationFailure carrying
  /// every violation found; never yields a partially valid graph.
  static AttackGraph build(GraphDefinition def);

  const NodeId& goal_id() const { return def_.goal_id; }
  const std::string& goal_label() const { return def_.goal_label; }

  /// Steps sorted by id.
  const std::vector<StepNode>& steps() const { return def_.steps; }
  const StepNode* find_step(const NodeId& id) const;
  /// Throws Error(unknown_node) when absent.
  const StepNode& step(const NodeId& id) const;
  bool is_goal(const NodeId& id) const { return id == def_.goal_id; }

  /// Edges sorted by (from, to).
  const std::vector<Edge>& edges() const { return def_.edges; }

  const std::map<NodeId, GateKind>& declared_gates() const { return gates_; }
  /// Declared gate, or AND for nodes that never declared one.
  GateKind gate_of(const NodeId& id) const;

  const std::map<std::string, std::vector<NodeId>>& scopes() const {
    return scopes_;
  }
  bool has_scope(const std::string& name) const;
  /// Throws Error(unknown_scope) when absent.
  const std::vector<NodeId>& scope_nodes(const std::string& name) const;

  std::vector<NodeId> predecessors(const NodeId& id) const;
  std::vector<NodeId> successors(const NodeId& id) const;

  /// Step ids in a deterministic topological order (goal excluded).
  const std::vector<NodeId>& topological_order() const { return topo_; }

  /// Returns a graph with the named steps marked forced-fail. Ids must name
  /// non-junction steps. Marking an already-neutralized step is a no-op, so
  /// neutralizing A then B equals neutralizing A ∪ B.
  AttackGraph neutralize(const std::vector<NodeId>& ids) const;

  /// Returns a graph with one step's weight lowered to `new_weight`.
  /// Requires 0 <= new_weight < current weight and a free (non-neutralized)
  /// non-junction target.
  AttackGraph reduce_weight(const NodeId& id, int new_weight) const;

  /// The canonical definition (steps/edges sorted, tags normalized).
  const GraphDefinition& definition() const { return def_; }

  friend bool operator==(const AttackGraph& a, const AttackGraph& b) {
    return a.def_.goal_id == b.def_.goal_id &&
           a.def_.goal_label == b.def_.goal_label &&
           a.def_.steps == b.def_.steps && a.def_.edges == b.def_.edges &&
           a.gates_ == b.gates_ && a.scopes_ == b.scopes_;
  }

 private:
  AttackGraph() = default;
  void index();

  GraphDefinition def_;  // canonicalized
  std::map<NodeId, GateKind> gates_;
  std::map<std::string, std::vector<NodeId>> scopes_;
  std::map<NodeId, std::size_t> step_index_;
  std::map<NodeId, std::vector<NodeId>> preds_;
  std::map<NodeId, std::vector<NodeId>> succs_;
  std::vector<NodeId> topo_;
};

/// Nodes of `scope` that can participate in a route to the goal, plus the
/// junctions those routes activate. A junction is active when its gate is
/// satisfied by active predecessors, so an AND junction with an input
/// outside the scope contributes nothing to that scope.
std::set<NodeId> scope_active_nodes(const AttackGraph& graph,
                                    const std::string& scope);

struct RoleDerivation {
  std::map<NodeId, Role> roles;

  /// Declared role disagrees with the derived one (declared wins; the
  /// derivation is advisory).
  struct Discrepancy {
    NodeId node;
    Role declared;
    Role derived;
  };
  std::vector<Discrepancy> discrepancies;

  /// The heuristic derived different roles in different scopes. Reported,
  /// not guessed; the node is omitted from `roles`.
  struct Ambiguity {
    NodeId node;
    std::string scope_a;
    Role role_a;
    std::string scope_b;
    Role role_b;
  };
  std::vector<Ambiguity> ambiguities;
};

/// Heuristic role assignment from structure: direct predecessors of an
/// OR-gated (or single-predecessor) goal are terminal; source inputs of an
/// AND gate that lies on every in-scope route are mandatory; remaining
/// weighted steps are soft. Deterministic and independent of insertion
/// order. Graphs with no scopes are treated as one whole-graph scope.
RoleDerivation derive_roles(const AttackGraph& graph);

}  // namespace agraph
