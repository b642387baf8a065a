#include "agraph/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "agraph/errors.hpp"

namespace agraph {

namespace {

std::string join_ids(const std::vector<NodeId>& ids, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += sep;
    out += ids[i].token;
  }
  return out;
}

}  // namespace

bool NodeId::valid_token(const std::string& t) {
  if (t.empty()) return false;
  for (char c : t) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

const char* role_name(Role role) {
  switch (role) {
    case Role::mandatory: return "mandatory";
    case Role::soft: return "soft";
    case Role::terminal: return "terminal";
    case Role::junction: return "junction";
  }
  return "unknown";
}

const char* gate_name(GateKind gate) {
  return gate == GateKind::and_gate ? "and" : "or";
}

std::optional<Role> role_from_name(const std::string& name) {
  if (name == "mandatory") return Role::mandatory;
  if (name == "soft") return Role::soft;
  if (name == "terminal") return Role::terminal;
  if (name == "junction") return Role::junction;
  return std::nullopt;
}

std::optional<GateKind> gate_from_name(const std::string& name) {
  if (name == "and") return GateKind::and_gate;
  if (name == "or") return GateKind::or_gate;
  return std::nullopt;
}

const char* violation_code_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::invalid_identifier: return "invalid_identifier";
    case ViolationCode::duplicate_id: return "duplicate_id";
    case ViolationCode::unknown_node: return "unknown_node";
    case ViolationCode::negative_weight: return "negative_weight";
    case ViolationCode::goal_has_weight: return "goal_has_weight";
    case ViolationCode::goal_has_outgoing_edge: return "goal_has_outgoing_edge";
    case ViolationCode::cycle_detected: return "cycle_detected";
    case ViolationCode::unreachable_node: return "unreachable_node";
    case ViolationCode::missing_gate: return "missing_gate";
    case ViolationCode::duplicate_gate: return "duplicate_gate";
    case ViolationCode::junction_has_weight: return "junction_has_weight";
    case ViolationCode::terminal_not_adjacent_to_goal:
      return "terminal_not_adjacent_to_goal";
    case ViolationCode::duplicate_edge: return "duplicate_edge";
    case ViolationCode::duplicate_scope: return "duplicate_scope";
    case ViolationCode::duplicate_scope_entry: return "duplicate_scope_entry";
  }
  return "unknown";
}

ValidationFailure::ValidationFailure(std::vector<Violation> violations)
    : std::runtime_error(violations.empty()
                             ? std::string("graph validation failed")
                             : "graph validation failed: " +
                                   violations.front().message),
      violations_(std::move(violations)) {}

std::vector<Violation> validate(const GraphDefinition& def) {
  std::vector<Violation> out;
  auto add = [&out](ViolationCode code, std::string message,
                    std::vector<NodeId> nodes = {}) {
    out.push_back(Violation{code, std::move(message), std::move(nodes)});
  };

  if (!NodeId::valid_token(def.goal_id.token)) {
    add(ViolationCode::invalid_identifier,
        "goal id '" + def.goal_id.token + "' is not a valid identifier",
        {def.goal_id});
  }

  // Step identity and per-node fields.
  std::set<NodeId> step_ids;
  for (const StepNode& s : def.steps) {
    if (!NodeId::valid_token(s.id.token)) {
      add(ViolationCode::invalid_identifier,
          "node id '" + s.id.token + "' is not a valid identifier", {s.id});
      continue;
    }
    if (s.id == def.goal_id) {
      if (s.weight > 0) {
        add(ViolationCode::goal_has_weight,
            "goal '" + s.id.token + "' must not carry a weight", {s.id});
      } else {
        add(ViolationCode::duplicate_id,
            "node '" + s.id.token + "' redeclares the goal", {s.id});
      }
      continue;
    }
    if (!step_ids.insert(s.id).second) {
      add(ViolationCode::duplicate_id,
          "node id '" + s.id.token + "' declared more than once", {s.id});
      continue;
    }
    if (s.weight < 0) {
      add(ViolationCode::negative_weight,
          "node '" + s.id.token + "' has negative weight " +
              std::to_string(s.weight),
          {s.id});
    }
    if (s.is_junction() && s.weight != 0) {
      add(ViolationCode::junction_has_weight,
          "junction '" + s.id.token + "' must have weight 0", {s.id});
    }
    for (const std::string& tag : s.tags) {
      if (!NodeId::valid_token(tag)) {
        add(ViolationCode::invalid_identifier,
            "tag '" + tag + "' on node '" + s.id.token +
                "' must match [a-z0-9_]+",
            {s.id});
      }
    }
  }

  auto known = [&](const NodeId& id) {
    return id == def.goal_id || step_ids.count(id) > 0;
  };

  // Edges: endpoints known, goal is a sink, no duplicates.
  std::set<Edge> edge_set;
  std::vector<Edge> edges;  // deduplicated, endpoints known
  for (const Edge& e : def.edges) {
    bool ok = true;
    for (const NodeId& end : {e.from, e.to}) {
      if (!known(end)) {
        add(ViolationCode::unknown_node,
            "edge " + e.from.token + " -> " + e.to.token +
                " references unknown node '" + end.token + "'",
            {end});
        ok = false;
      }
    }
    if (!ok) continue;
    if (e.from == def.goal_id) {
      add(ViolationCode::goal_has_outgoing_edge,
          "goal '" + e.from.token + "' has an outgoing edge to '" +
              e.to.token + "'",
          {e.to});
      continue;
    }
    if (!edge_set.insert(e).second) {
      add(ViolationCode::duplicate_edge,
          "edge " + e.from.token + " -> " + e.to.token + " declared twice",
          {e.from, e.to});
      continue;
    }
    edges.push_back(e);
  }

  // Gates: known targets, one declaration each.
  std::set<NodeId> gate_ids;
  for (const auto& [id, gate] : def.gates) {
    (void)gate;
    if (!known(id)) {
      add(ViolationCode::unknown_node,
          "gate declared for unknown node '" + id.token + "'", {id});
      continue;
    }
    if (!gate_ids.insert(id).second) {
      add(ViolationCode::duplicate_gate,
          "gate for '" + id.token + "' declared more than once", {id});
    }
  }

  // Scopes: unique names, known non-goal members, no duplicate members.
  std::set<std::string> scope_names;
  for (const auto& [name, members] : def.scopes) {
    if (!NodeId::valid_token(name)) {
      add(ViolationCode::invalid_identifier,
          "scope name '" + name + "' is not a valid identifier");
    }
    if (!scope_names.insert(name).second) {
      add(ViolationCode::duplicate_scope,
          "scope '" + name + "' declared more than once");
      continue;
    }
    std::set<NodeId> seen;
    for (const NodeId& id : members) {
      if (id == def.goal_id || !step_ids.count(id)) {
        add(ViolationCode::unknown_node,
            "scope '" + name + "' references " +
                (id == def.goal_id ? "the goal" : "unknown node") + " '" +
                id.token + "'",
            {id});
        continue;
      }
      if (!seen.insert(id).second) {
        add(ViolationCode::duplicate_scope_entry,
            "scope '" + name + "' lists '" + id.token + "' more than once",
            {id});
      }
    }
  }

  std::map<NodeId, std::vector<NodeId>> succs, preds;
  for (const Edge& e : edges) {
    succs[e.from].push_back(e.to);
    preds[e.to].push_back(e.from);
  }

  // Cycle detection with an explicit stack (input files can be arbitrarily
  // deep); reports each cycle found once, rotation-canonicalized.
  {
    std::map<NodeId, int> color;  // 0 white, 1 gray, 2 black
    std::vector<NodeId> path;
    std::set<std::vector<NodeId>> reported;

    struct Frame {
      NodeId node;
      std::size_t next_child = 0;
    };

    for (const StepNode& root : def.steps) {
      if (!step_ids.count(root.id) || color[root.id] != 0) continue;
      std::vector<Frame> stack{{root.id}};
      color[root.id] = 1;
      path.push_back(root.id);
      while (!stack.empty()) {
        Frame& frame = stack.back();
        const std::vector<NodeId>& children = succs[frame.node];
        if (frame.next_child >= children.size()) {
          color[frame.node] = 2;
          path.pop_back();
          stack.pop_back();
          continue;
        }
        const NodeId& next = children[frame.next_child++];
        int c = color.count(next) ? color[next] : 0;
        if (c == 0) {
          color[next] = 1;
          path.push_back(next);
          stack.push_back(Frame{next});
        } else if (c == 1) {
          auto it = std::find(path.begin(), path.end(), next);
          std::vector<NodeId> body(it, path.end());
          auto min_it = std::min_element(body.begin(), body.end());
          std::rotate(body.begin(), min_it, body.end());
          if (reported.insert(body).second) {
            std::vector<NodeId> named = body;
            named.push_back(body.front());
            std::string message = "cycle detected: ";
            if (named.size() > 12) {
              message += join_ids({named.begin(), named.begin() + 12}, " -> ") +
                         " -> ... (" + std::to_string(body.size()) + " nodes)";
            } else {
              message += join_ids(named, " -> ");
            }
            add(ViolationCode::cycle_detected, message, body);
          }
        }
      }
    }
  }

  // Every step must reach the goal (reverse reachability from the goal).
  {
    std::set<NodeId> reaches_goal{def.goal_id};
    std::deque<NodeId> queue{def.goal_id};
    while (!queue.empty()) {
      NodeId cur = queue.front();
      queue.pop_front();
      for (const NodeId& p : preds[cur]) {
        if (reaches_goal.insert(p).second) queue.push_back(p);
      }
    }
    for (const NodeId& id : step_ids) {
      if (!reaches_goal.count(id)) {
        add(ViolationCode::unreachable_node,
            "node '" + id.token + "' has no directed path to the goal", {id});
      }
    }
  }

  // Multi-predecessor nodes must declare a gate.
  for (const auto& [id, ps] : preds) {
    if (ps.size() >= 2 && !gate_ids.count(id)) {
      add(ViolationCode::missing_gate,
          "node '" + id.token + "' has " + std::to_string(ps.size()) +
              " predecessors but no declared gate",
          {id});
    }
  }

  // Declared terminals must sit directly under the goal.
  {
    std::set<NodeId> goal_preds(preds[def.goal_id].begin(),
                                preds[def.goal_id].end());
    for (const StepNode& s : def.steps) {
      if (step_ids.count(s.id) && s.role == Role::terminal &&
          !goal_preds.count(s.id)) {
        add(ViolationCode::terminal_not_adjacent_to_goal,
            "terminal '" + s.id.token +
                "' is not a direct predecessor of the goal",
            {s.id});
      }
    }
  }

  return out;
}

AttackGraph AttackGraph::build(GraphDefinition def) {
  std::vector<Violation> violations = validate(def);
  if (!violations.empty()) throw ValidationFailure(std::move(violations));

  AttackGraph g;
  g.def_ = std::move(def);

  std::sort(g.def_.steps.begin(), g.def_.steps.end(),
            [](const StepNode& a, const StepNode& b) { return a.id < b.id; });
  std::sort(g.def_.edges.begin(), g.def_.edges.end());
  for (StepNode& s : g.def_.steps) {
    std::sort(s.tags.begin(), s.tags.end());
    s.tags.erase(std::unique(s.tags.begin(), s.tags.end()), s.tags.end());
  }
  for (const auto& [id, gate] : g.def_.gates) g.gates_.emplace(id, gate);
  for (const auto& [name, members] : g.def_.scopes)
    g.scopes_.emplace(name, members);

  g.index();
  return g;
}

void AttackGraph::index() {
  step_index_.clear();
  preds_.clear();
  succs_.clear();
  topo_.clear();

  for (std::size_t i = 0; i < def_.steps.size(); ++i)
    step_index_[def_.steps[i].id] = i;
  for (const Edge& e : def_.edges) {
    succs_[e.from].push_back(e.to);
    preds_[e.to].push_back(e.from);
  }
  for (auto& [id, v] : succs_) std::sort(v.begin(), v.end());
  for (auto& [id, v] : preds_) std::sort(v.begin(), v.end());

  // Kahn's algorithm over steps, smallest id first for determinism.
  std::map<NodeId, std::size_t> indegree;
  for (const StepNode& s : def_.steps) indegree[s.id] = 0;
  for (const Edge& e : def_.edges) {
    if (e.to != def_.goal_id) ++indegree[e.to];
  }
  std::set<NodeId> ready;
  for (const auto& [id, d] : indegree) {
    if (d == 0) ready.insert(id);
  }
  while (!ready.empty()) {
    NodeId id = *ready.begin();
    ready.erase(ready.begin());
    topo_.push_back(id);
    auto it = succs_.find(id);
    if (it == succs_.end()) continue;
    for (const NodeId& next : it->second) {
      if (next == def_.goal_id) continue;
      if (--indegree[next] == 0) ready.insert(next);
    }
  }
}

const StepNode* AttackGraph::find_step(const NodeId& id) const {
  auto it = step_index_.find(id);
  return it == step_index_.end() ? nullptr : &def_.steps[it->second];
}

const StepNode& AttackGraph::step(const NodeId& id) const {
  const StepNode* s = find_step(id);
  if (!s) raise(Errc::unknown_node, "unknown node '" + id.token + "'");
  return *s;
}

GateKind AttackGraph::gate_of(const NodeId& id) const {
  auto it = gates_.find(id);
  return it == gates_.end() ? GateKind::and_gate : it->second;
}

bool AttackGraph::has_scope(const std::string& name) const {
  return scopes_.count(name) > 0;
}

const std::vector<NodeId>& AttackGraph::scope_nodes(
    const std::string& name) const {
  auto it = scopes_.find(name);
  if (it == scopes_.end())
    raise(Errc::unknown_scope, "unknown scope '" + name + "'");
  return it->second;
}

std::vector<NodeId> AttackGraph::predecessors(const NodeId& id) const {
  auto it = preds_.find(id);
  return it == preds_.end() ? std::vector<NodeId>{} : it->second;
}

std::vector<NodeId> AttackGraph::successors(const NodeId& id) const {
  auto it = succs_.find(id);
  return it == succs_.end() ? std::vector<NodeId>{} : it->second;
}

AttackGraph AttackGraph::neutralize(const std::vector<NodeId>& ids) const {
  AttackGraph g = *this;
  for (const NodeId& id : ids) {
    auto it = g.step_index_.find(id);
    if (it == g.step_index_.end())
      raise(Errc::unknown_node, "cannot neutralize unknown node '" + id.token + "'");
    StepNode& s = g.def_.steps[it->second];
    if (s.is_junction())
      raise(Errc::cannot_neutralize_junction,
            "cannot neutralize junction '" + id.token + "'");
    s.forced_fail = true;
  }
  return g;
}

AttackGraph AttackGraph::reduce_weight(const NodeId& id, int new_weight) const {
  AttackGraph g = *this;
  auto it = g.step_index_.find(id);
  if (it == g.step_index_.end())
    raise(Errc::unknown_node, "cannot reduce weight of unknown node '" + id.token + "'");
  StepNode& s = g.def_.steps[it->second];
  if (s.is_junction())
    raise(Errc::invalid_weight, "junction '" + id.token + "' carries no weight");
  if (s.forced_fail)
    raise(Errc::cannot_reduce_neutralized,
          "node '" + id.token + "' is neutralized; reducing its weight has no effect");
  if (new_weight < 0 || new_weight >= s.weight)
    raise(Errc::invalid_weight,
          "new weight " + std::to_string(new_weight) + " for '" + id.token +
              "' must satisfy 0 <= w < " + std::to_string(s.weight));
  s.weight = new_weight;
  return g;
}

std::set<NodeId> scope_active_nodes(const AttackGraph& graph,
                                    const std::string& scope) {
  const std::vector<NodeId>& members = graph.scope_nodes(scope);
  std::set<NodeId> in_scope(members.begin(), members.end());
  std::set<NodeId> active;

  for (const NodeId& id : graph.topological_order()) {
    const StepNode& s = graph.step(id);
    if (!s.is_junction()) {
      if (in_scope.count(id)) active.insert(id);
      continue;
    }
    std::vector<NodeId> preds = graph.predecessors(id);
    if (preds.empty()) continue;
    bool ok;
    if (graph.gate_of(id) == GateKind::and_gate) {
      ok = std::all_of(preds.begin(), preds.end(),
                       [&](const NodeId& p) { return active.count(p) > 0; });
    } else {
      ok = std::any_of(preds.begin(), preds.end(),
                       [&](const NodeId& p) { return active.count(p) > 0; });
    }
    if (ok) active.insert(id);
  }
  return active;
}

namespace {

struct ScopeView {
  std::set<NodeId> active;  // active steps (goal excluded)
  std::map<NodeId, std::vector<NodeId>> preds, succs;
  std::set<NodeId> sources;  // active steps with no active predecessor

  bool goal_reachable_avoiding(const AttackGraph& g, const NodeId* removed) const {
    std::deque<NodeId> queue;
    std::set<NodeId> seen;
    for (const NodeId& s : sources) {
      if (removed && s == *removed) continue;
      seen.insert(s);
      queue.push_back(s);
    }
    while (!queue.empty()) {
      NodeId cur = queue.front();
      queue.pop_front();
      if (cur == g.goal_id()) return true;
      auto it = succs.find(cur);
      if (it == succs.end()) continue;
      for (const NodeId& n : it->second) {
        if (removed && n == *removed) continue;
        if (seen.insert(n).second) queue.push_back(n);
      }
    }
    return false;
  }
};

ScopeView make_scope_view(const AttackGraph& g, const std::string& scope) {
  ScopeView v;
  v.active = scope_active_nodes(g, scope);
  for (const Edge& e : g.edges()) {
    bool from_ok = v.active.count(e.from) > 0;
    bool to_ok = v.active.count(e.to) > 0 || e.to == g.goal_id();
    if (from_ok && to_ok) {
      v.succs[e.from].push_back(e.to);
      v.preds[e.to].push_back(e.from);
    }
  }
  for (const NodeId& id : v.active) {
    if (!v.preds.count(id)) v.sources.insert(id);
  }
  return v;
}

/// Role derivation within one scope; see derive_roles.
std::map<NodeId, Role> derive_scope_roles(const AttackGraph& g,
                                          const std::string& scope) {
  ScopeView view = make_scope_view(g, scope);
  std::map<NodeId, Role> roles;

  std::vector<NodeId> weighted;
  for (const NodeId& id : g.scope_nodes(scope)) {
    if (!g.step(id).is_junction()) weighted.push_back(id);
  }

  // Terminals: weighted steps directly under an OR-gated (or sole-input)
  // goal, judged on the scope's active subgraph.
  std::set<NodeId> terminals;
  {
    auto it = view.preds.find(g.goal_id());
    if (it != view.preds.end()) {
      const std::vector<NodeId>& gp = it->second;
      bool or_like = gp.size() == 1 || g.gate_of(g.goal_id()) == GateKind::or_gate;
      if (or_like) {
        for (const NodeId& p : gp) {
          if (view.active.count(p) && !g.step(p).is_junction())
            terminals.insert(p);
        }
      }
    }
  }

  // Nodes on some source-to-goal route.
  std::set<NodeId> from_sources;
  {
    std::deque<NodeId> queue(view.sources.begin(), view.sources.end());
    from_sources.insert(view.sources.begin(), view.sources.end());
    while (!queue.empty()) {
      NodeId cur = queue.front();
      queue.pop_front();
      auto it = view.succs.find(cur);
      if (it == view.succs.end()) continue;
      for (const NodeId& n : it->second) {
        if (from_sources.insert(n).second) queue.push_back(n);
      }
    }
  }
  std::set<NodeId> to_goal;
  {
    std::deque<NodeId> queue{g.goal_id()};
    to_goal.insert(g.goal_id());
    while (!queue.empty()) {
      NodeId cur = queue.front();
      queue.pop_front();
      auto it = view.preds.find(cur);
      if (it == view.preds.end()) continue;
      for (const NodeId& n : it->second) {
        if (to_goal.insert(n).second) queue.push_back(n);
      }
    }
  }
  auto on_route = [&](const NodeId& id) {
    return from_sources.count(id) && to_goal.count(id);
  };

  // Mandatory: source inputs of an effectively-AND node that every route
  // passes through.
  std::set<NodeId> mandatory;
  std::vector<NodeId> gate_candidates(view.active.begin(), view.active.end());
  gate_candidates.push_back(g.goal_id());
  for (const NodeId& id : gate_candidates) {
    if (!on_route(id)) continue;
    auto pit = view.preds.find(id);
    if (pit == view.preds.end() || pit->second.empty()) continue;
    bool effectively_and =
        pit->second.size() == 1 || g.gate_of(id) == GateKind::and_gate;
    if (!effectively_and) continue;
    if (id != g.goal_id() && view.goal_reachable_avoiding(g, &id)) continue;
    for (const NodeId& p : pit->second) {
      if (view.sources.count(p) && !g.step(p).is_junction() &&
          !terminals.count(p)) {
        mandatory.insert(p);
      }
    }
  }

  for (const NodeId& id : weighted) {
    if (terminals.count(id)) {
      roles[id] = Role::terminal;
    } else if (mandatory.count(id)) {
      roles[id] = Role::mandatory;
    } else {
      roles[id] = Role::soft;
    }
  }
  return roles;
}

}  // namespace

RoleDerivation derive_roles(const AttackGraph& graph) {
  RoleDerivation out;

  // Junctions keep their role unconditionally.
  for (const StepNode& s : graph.steps()) {
    if (s.is_junction()) out.roles[s.id] = Role::junction;
  }

  const AttackGraph* base = &graph;
  std::optional<AttackGraph> with_implicit_scope;
  if (graph.scopes().empty()) {
    // No scopes declared: derive over the whole weighted graph.
    GraphDefinition def = graph.definition();
    std::vector<NodeId> all;
    for (const StepNode& s : def.steps) {
      if (!s.is_junction()) all.push_back(s.id);
    }
    def.scopes.emplace_back("all", all);
    with_implicit_scope = AttackGraph::build(std::move(def));
    base = &*with_implicit_scope;
  }

  std::map<NodeId, std::pair<std::string, Role>> first_seen;
  std::set<NodeId> ambiguous;
  for (const auto& [name, members] : base->scopes()) {
    (void)members;
    std::map<NodeId, Role> scope_roles = derive_scope_roles(*base, name);
    for (const auto& [id, role] : scope_roles) {
      auto it = first_seen.find(id);
      if (it == first_seen.end()) {
        first_seen.emplace(id, std::make_pair(name, role));
      } else if (it->second.second != role && !ambiguous.count(id)) {
        ambiguous.insert(id);
        out.ambiguities.push_back(RoleDerivation::Ambiguity{
            id, it->second.first, it->second.second, name, role});
      }
    }
  }

  for (const auto& [id, seen] : first_seen) {
    if (!ambiguous.count(id)) out.roles[id] = seen.second;
  }
  // Weighted steps outside every scope degrade gracefully to soft.
  for (const StepNode& s : graph.steps()) {
    if (!s.is_junction() && !out.roles.count(s.id) && !ambiguous.count(s.id)) {
      out.roles[s.id] = Role::soft;
    }
  }

  for (const StepNode& s : graph.steps()) {
    if (!s.role || ambiguous.count(s.id)) continue;
    auto it = out.roles.find(s.id);
    if (it != out.roles.end() && it->second != *s.role) {
      out.discrepancies.push_back(
          RoleDerivation::Discrepancy{s.id, *s.role, it->second});
    }
  }
  return out;
}

}  // namespace agraph
