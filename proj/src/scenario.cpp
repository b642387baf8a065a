#include "agraph/scenario.hpp"

#include <algorithm>
#include <numeric>

#include "agraph/errors.hpp"

namespace agraph {

namespace {

constexpr std::size_t kEnumerationCap = 20;  // weighted nodes per scope
constexpr std::size_t kCutSetCap = 24;

struct ScopeSteps {
  std::vector<const StepNode*> columns;  // scope order, weighted only
  std::vector<const StepNode*> free_mandatory;
  std::vector<const StepNode*> free_soft;
  std::vector<const StepNode*> free_terminal;
  bool has_terminals = false;        // any terminal declared in scope
  bool mandatory_forced = false;     // some mandatory step is neutralized
  std::int64_t total_weight = 0;
};

ScopeSteps resolve_scope(const AttackGraph& graph, const std::string& scope,
                         bool require_positive_total = true) {
  ScopeSteps out;
  std::vector<NodeId> missing;
  for (const NodeId& id : graph.scope_nodes(scope)) {
    const StepNode& s = graph.step(id);
    if (s.is_junction()) continue;
    out.columns.push_back(&s);
    out.total_weight += s.weight;
    if (!s.role) {
      missing.push_back(id);
      continue;
    }
    switch (*s.role) {
      case Role::mandatory:
        if (s.forced_fail) out.mandatory_forced = true;
        else out.free_mandatory.push_back(&s);
        break;
      case Role::soft:
        if (!s.forced_fail) out.free_soft.push_back(&s);
        break;
      case Role::terminal:
        out.has_terminals = true;
        if (!s.forced_fail) out.free_terminal.push_back(&s);
        break;
      case Role::junction:
        break;
    }
  }
  if (!missing.empty()) {
    std::string names;
    for (const NodeId& id : missing) names += " " + id.token;
    raise(Errc::missing_roles,
          "scope '" + scope + "' has steps without a role:" + names);
  }
  if (require_positive_total && out.total_weight <= 0) {
    raise(Errc::zero_total_weight,
          "scope '" + scope + "' has zero total weight; scores are undefined");
  }
  return out;
}

std::vector<ScenarioColumn> make_columns(const ScopeSteps& steps) {
  std::vector<ScenarioColumn> cols;
  cols.reserve(steps.columns.size());
  for (const StepNode* s : steps.columns)
    cols.push_back(ScenarioColumn{s->id, s->label, s->weight});
  return cols;
}

Scenario make_scenario(const ScopeSteps& steps,
                       const std::map<NodeId, Outcome>& assignment,
                       bool admissible) {
  Scenario row;
  row.assignment = assignment;
  row.total_weight = steps.total_weight;
  for (const StepNode* s : steps.columns) {
    if (assignment.at(s->id) == Outcome::success) row.achieved_weight += s->weight;
  }
  row.score = Ratio(row.achieved_weight, row.total_weight);
  row.admissible = admissible;
  return row;
}

/// Descending score, ties broken by the S/F pattern in column order with S
/// before F.
void sort_rows(ScenarioTable& table) {
  std::sort(table.rows.begin(), table.rows.end(),
            [&table](const Scenario& a, const Scenario& b) {
              if (a.score != b.score) return a.score > b.score;
              for (const ScenarioColumn& col : table.columns) {
                Outcome oa = a.assignment.at(col.id);
                Outcome ob = b.assignment.at(col.id);
                if (oa != ob) return oa == Outcome::success;
              }
              return false;
            });
}

}  // namespace

std::string ScenarioTable::pattern(const Scenario& row) const {
  std::string out;
  out.reserve(columns.size());
  for (const ScenarioColumn& col : columns) {
    out += row.assignment.at(col.id) == Outcome::success ? 'S' : 'F';
  }
  return out;
}

ScenarioTable enumerate_scenarios(const AttackGraph& graph,
                                  const std::string& scope) {
  ScopeSteps steps = resolve_scope(graph, scope);
  if (steps.columns.size() > kEnumerationCap) {
    raise(Errc::scope_too_large,
          "scope '" + scope + "' has " + std::to_string(steps.columns.size()) +
              " weighted steps; enumeration is capped at " +
              std::to_string(kEnumerationCap));
  }

  ScenarioTable table;
  table.scope = scope;
  table.columns = make_columns(steps);

  // No admissible scenario exists once a mandatory step is neutralized, or
  // once every terminal is.
  if (steps.mandatory_forced ||
      (steps.has_terminals && steps.free_terminal.empty())) {
    return table;
  }

  std::map<NodeId, Outcome> base;
  for (const StepNode* s : steps.columns) {
    base[s->id] = s->forced_fail ? Outcome::failure : Outcome::success;
  }

  const std::size_t s_count = steps.free_soft.size();
  const std::size_t t_count = steps.free_terminal.size();
  const std::uint64_t soft_limit = std::uint64_t{1} << s_count;
  const std::uint64_t term_limit = std::uint64_t{1} << t_count;

  for (std::uint64_t soft_mask = 0; soft_mask < soft_limit; ++soft_mask) {
    for (std::uint64_t term_mask = 0; term_mask < term_limit; ++term_mask) {
      if (steps.has_terminals && term_mask == 0) continue;  // need one S
      std::map<NodeId, Outcome> assignment = base;
      for (std::size_t i = 0; i < s_count; ++i) {
        assignment[steps.free_soft[i]->id] =
            (soft_mask >> i) & 1 ? Outcome::success : Outcome::failure;
      }
      for (std::size_t i = 0; i < t_count; ++i) {
        assignment[steps.free_terminal[i]->id] =
            (term_mask >> i) & 1 ? Outcome::success : Outcome::failure;
      }
      table.rows.push_back(make_scenario(steps, assignment, true));
    }
  }

  sort_rows(table);
  return table;
}

ScenarioTable brute_force_oracle(const AttackGraph& graph,
                                 const std::string& scope) {
  ScopeSteps steps = resolve_scope(graph, scope);
  const std::size_t n = steps.columns.size();
  if (n > kEnumerationCap) {
    raise(Errc::scope_too_large,
          "scope '" + scope + "' has " + std::to_string(n) +
              " weighted steps; the oracle is capped at " +
              std::to_string(kEnumerationCap));
  }

  ScenarioTable table;
  table.scope = scope;
  table.columns = make_columns(steps);

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::map<NodeId, Outcome> assignment;
    bool forced_violated = false;
    for (std::size_t i = 0; i < n; ++i) {
      const StepNode* s = steps.columns[i];
      bool success = (mask >> i) & 1;
      if (success && s->forced_fail) {
        forced_violated = true;
        break;
      }
      assignment[s->id] = success ? Outcome::success : Outcome::failure;
    }
    if (forced_violated) continue;

    bool admissible = true;
    bool some_terminal_s = false;
    bool any_terminal = false;
    for (const StepNode* s : steps.columns) {
      bool success = assignment.at(s->id) == Outcome::success;
      if (s->role == Role::mandatory && !success) admissible = false;
      if (s->role == Role::terminal) {
        any_terminal = true;
        if (success) some_terminal_s = true;
      }
    }
    if (any_terminal && !some_terminal_s) admissible = false;
    if (!admissible) continue;

    table.rows.push_back(make_scenario(steps, assignment, true));
  }

  sort_rows(table);
  return table;
}

Scenario score_scenario(const AttackGraph& graph, const std::string& scope,
                        const std::map<NodeId, Outcome>& assignment) {
  ScopeSteps steps = resolve_scope(graph, scope);

  std::set<NodeId> expected;
  for (const StepNode* s : steps.columns) expected.insert(s->id);
  for (const auto& [id, outcome] : assignment) {
    (void)outcome;
    if (!expected.count(id)) {
      raise(Errc::unknown_node,
            "assignment names '" + id.token + "', which is not a weighted step of scope '" +
                scope + "'");
    }
  }
  std::vector<NodeId> missing;
  for (const NodeId& id : expected) {
    if (!assignment.count(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    std::string names;
    for (const NodeId& id : missing) names += " " + id.token;
    raise(Errc::incomplete_assignment,
          "assignment for scope '" + scope + "' is missing:" + names);
  }

  bool admissible = true;
  bool any_terminal = false;
  bool some_terminal_s = false;
  for (const StepNode* s : steps.columns) {
    bool success = assignment.at(s->id) == Outcome::success;
    if (success && s->forced_fail) admissible = false;
    if (s->role == Role::mandatory && !success) admissible = false;
    if (s->role == Role::terminal) {
      any_terminal = true;
      if (success) some_terminal_s = true;
    }
  }
  if (any_terminal && !some_terminal_s) admissible = false;

  return make_scenario(steps, assignment, admissible);
}

std::string goal_percentage(const Ratio& score, GoalDisplay mode) {
  if (score < Ratio(0) || score > Ratio(1)) {
    raise(Errc::invalid_argument,
          "goal percentage expects a probability in [0, 1], got " +
              fraction_string(score));
  }
  const std::int64_t n = score.numerator();
  const std::int64_t d = score.denominator();

  switch (mode) {
    case GoalDisplay::paper: {
      // Integer percent, halves away from zero.
      std::int64_t value = (200 * n + d) / (2 * d);
      return std::to_string(value) + "%";
    }
    case GoalDisplay::decimal: {
      std::int64_t tenths = (2000 * n + d) / (2 * d);
      return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) +
             "%";
    }
    case GoalDisplay::exact: {
      Ratio percent = score * Ratio(100);
      std::int64_t num = percent.numerator();
      std::int64_t den = percent.denominator();
      if (den == 1) return std::to_string(num) + "%";
      // Terminating decimal when the denominator is 2^a * 5^b.
      std::int64_t rest = den;
      int twos = 0, fives = 0;
      while (rest % 2 == 0) { rest /= 2; ++twos; }
      while (rest % 5 == 0) { rest /= 5; ++fives; }
      int digits = std::max(twos, fives);
      if (rest != 1 || digits > 18) return fraction_string(percent) + "%";
      unsigned __int128 scaled = static_cast<unsigned __int128>(num);
      for (int i = 0; i < digits; ++i) scaled *= 10;
      scaled /= static_cast<unsigned __int128>(den);
      std::string body;
      while (scaled > 0) {
        body += static_cast<char>('0' + static_cast<int>(scaled % 10));
        scaled /= 10;
      }
      while (static_cast<int>(body.size()) <= digits) body += '0';
      std::reverse(body.begin(), body.end());
      body.insert(body.size() - digits, ".");
      return body + "%";
    }
  }
  raise(Errc::invalid_argument, "unknown goal display mode");
}

std::vector<Chain> enumerate_chains(const AttackGraph& graph,
                                    const std::string& scope) {
  std::set<NodeId> active = scope_active_nodes(graph, scope);

  std::map<NodeId, std::vector<NodeId>> succs;
  std::set<NodeId> has_pred;
  for (const Edge& e : graph.edges()) {
    bool from_ok = active.count(e.from) > 0;
    bool to_ok = active.count(e.to) > 0 || graph.is_goal(e.to);
    if (from_ok && to_ok) {
      succs[e.from].push_back(e.to);
      has_pred.insert(e.to);
    }
  }
  for (auto& [id, v] : succs) std::sort(v.begin(), v.end());

  std::vector<Chain> chains;
  std::vector<NodeId> path;
  auto dfs = [&](const NodeId& cur, auto&& self) -> void {
    path.push_back(cur);
    if (graph.is_goal(cur)) {
      chains.push_back(Chain{path});
    } else {
      auto it = succs.find(cur);
      if (it != succs.end()) {
        for (const NodeId& next : it->second) self(next, self);
      }
    }
    path.pop_back();
  };
  for (const NodeId& id : active) {
    if (!has_pred.count(id)) dfs(id, dfs);
  }

  std::sort(chains.begin(), chains.end(),
            [](const Chain& a, const Chain& b) { return a.nodes < b.nodes; });
  return chains;
}

Ratio chain_average_risk(const AttackGraph& graph, const Chain& chain) {
  if (chain.nodes.empty()) raise(Errc::empty_chain, "chain has no nodes");

  std::set<Edge> edge_set(graph.edges().begin(), graph.edges().end());
  std::set<NodeId> seen;
  for (std::size_t i = 0; i < chain.nodes.size(); ++i) {
    const NodeId& id = chain.nodes[i];
    if (!seen.insert(id).second)
      raise(Errc::invalid_chain, "chain repeats node '" + id.token + "'");
    if (!graph.is_goal(id)) graph.step(id);  // unknown_node when absent
    if (i + 1 < chain.nodes.size() &&
        !edge_set.count(Edge{id, chain.nodes[i + 1]})) {
      raise(Errc::invalid_chain,
            "chain uses missing edge " + id.token + " -> " +
                chain.nodes[i + 1].token);
    }
  }
  if (chain.nodes.back() != graph.goal_id())
    raise(Errc::invalid_chain, "chain must end at the goal");

  std::int64_t total = 0;
  std::int64_t count = 0;
  for (const NodeId& id : chain.nodes) {
    if (graph.is_goal(id)) continue;
    const StepNode& s = graph.step(id);
    if (s.is_junction()) continue;
    total += s.weight;
    ++count;
  }
  if (count == 0)
    raise(Errc::empty_chain, "chain traverses no weighted steps");
  return Ratio(total, count);
}

std::vector<NodeFrequency> node_frequency(
    const std::vector<ScenarioTable>& tables) {
  std::map<NodeId, NodeFrequency> stats;
  for (const ScenarioTable& table : tables) {
    for (const ScenarioColumn& col : table.columns) {
      NodeFrequency& f = stats[col.id];
      f.id = col.id;
      f.scopes.push_back(table.scope);
      for (const Scenario& row : table.rows) {
        if (row.assignment.at(col.id) == Outcome::success) {
          ++f.s_count;
          f.weighted_count += col.weight;
        }
      }
    }
  }

  std::vector<NodeFrequency> out;
  out.reserve(stats.size());
  for (auto& [id, f] : stats) {
    std::sort(f.scopes.begin(), f.scopes.end());
    f.scopes.erase(std::unique(f.scopes.begin(), f.scopes.end()),
                   f.scopes.end());
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(),
            [](const NodeFrequency& a, const NodeFrequency& b) {
              if (a.s_count != b.s_count) return a.s_count > b.s_count;
              return a.id < b.id;
            });
  return out;
}

std::vector<CutSet> minimal_cut_sets(const AttackGraph& graph,
                                     const std::string& scope,
                                     std::size_t max_size) {
  if (max_size < 1)
    raise(Errc::invalid_argument, "max_size must be at least 1");
  ScopeSteps steps = resolve_scope(graph, scope, /*require_positive_total=*/false);
  if (steps.columns.size() > kCutSetCap) {
    raise(Errc::scope_too_large,
          "scope '" + scope + "' has " + std::to_string(steps.columns.size()) +
              " weighted steps; cut-set search is capped at " +
              std::to_string(kCutSetCap));
  }

  std::vector<CutSet> out;

  // Already blocked: the empty set is the unique minimal cut.
  if (steps.mandatory_forced ||
      (steps.has_terminals && steps.free_terminal.empty())) {
    out.push_back(CutSet{{}, true});
    return out;
  }

  // A cut must contain a mandatory step (minimal: exactly one) or, lacking
  // one, must neutralize every free terminal. Soft steps never block.
  for (const StepNode* m : steps.free_mandatory) {
    out.push_back(CutSet{{m->id}, true});
  }
  if (steps.has_terminals) {
    std::vector<NodeId> terminals;
    for (const StepNode* t : steps.free_terminal) terminals.push_back(t->id);
    std::sort(terminals.begin(), terminals.end());
    // Skip when it collapses to a mandatory singleton duplicate; roles are
    // exclusive, so that cannot happen — but it may exceed max_size.
    out.push_back(CutSet{std::move(terminals), true});
  }

  std::erase_if(out, [max_size](const CutSet& c) {
    return c.nodes.size() > max_size;
  });
  std::sort(out.begin(), out.end(), [](const CutSet& a, const CutSet& b) {
    if (a.nodes.size() != b.nodes.size())
      return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
  });
  return out;
}

}  // namespace agraph
