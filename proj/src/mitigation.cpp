#include "agraph/mitigation.hpp"

#include <algorithm>
#include <map>

#include "agraph/errors.hpp"

namespace agraph {

MitigationAction MitigationAction::neutralize_node(NodeId id) {
  MitigationAction a;
  a.kind = MitigationKind::neutralize;
  a.target = std::move(id);
  return a;
}

MitigationAction MitigationAction::reduce_node_weight(NodeId id,
                                                      int new_weight) {
  MitigationAction a;
  a.kind = MitigationKind::reduce_weight;
  a.target = std::move(id);
  a.new_weight = new_weight;
  return a;
}

namespace {

Ratio max_score(const ScenarioTable& table) {
  Ratio best(0);
  for (const Scenario& row : table.rows) best = std::max(best, row.score);
  return best;
}

}  // namespace

WhatIfResult what_if(const AttackGraph& graph, const std::string& scope,
                     const MitigationAction& action) {
  const std::vector<NodeId>& members = graph.scope_nodes(scope);
  if (std::find(members.begin(), members.end(), action.target) ==
      members.end()) {
    raise(Errc::unknown_node, "node '" + action.target.token +
                                  "' is not part of scope '" + scope + "'");
  }

  WhatIfResult result;
  result.action = action;
  result.before = enumerate_scenarios(graph, scope);

  AttackGraph mitigated =
      action.kind == MitigationKind::neutralize
          ? graph.neutralize({action.target})
          : graph.reduce_weight(action.target, action.new_weight);
  result.after = enumerate_scenarios(mitigated, scope);

  result.rows_eliminated = static_cast<std::int64_t>(result.before.rows.size()) -
                           static_cast<std::int64_t>(result.after.rows.size());
  result.max_score_delta =
      max_score(result.after) - max_score(result.before);

  // Align rows by assignment; an eliminated row's after-score is 0.
  if (!result.before.rows.empty()) {
    std::map<std::string, Ratio> after_scores;
    for (const Scenario& row : result.after.rows) {
      after_scores.emplace(result.after.pattern(row), row.score);
    }
    Ratio delta_sum(0);
    for (const Scenario& row : result.before.rows) {
      auto it = after_scores.find(result.before.pattern(row));
      Ratio after = it == after_scores.end() ? Ratio(0) : it->second;
      delta_sum += after - row.score;
    }
    result.mean_score_delta =
        delta_sum / Ratio(static_cast<std::int64_t>(result.before.rows.size()));
  }
  return result;
}

RecommendOutcome recommend(const AttackGraph& graph,
                           const std::vector<std::string>& scopes,
                           const Catalog& catalog, std::size_t k) {
  if (k < 1) raise(Errc::invalid_argument, "k must be at least 1");
  if (scopes.empty())
    raise(Errc::invalid_argument, "recommend needs at least one scope");

  RecommendOutcome out;
  if (catalog.records.empty()) {
    out.warnings.push_back(
        "catalog is empty; recommendations carry no mitigation text");
  }

  // Frequency rank over the untouched tables, for tie-breaking.
  std::vector<ScenarioTable> tables;
  for (const std::string& scope : scopes)
    tables.push_back(enumerate_scenarios(graph, scope));
  std::map<NodeId, std::size_t> freq_rank;
  {
    std::vector<NodeFrequency> freq = node_frequency(tables);
    for (std::size_t i = 0; i < freq.size(); ++i) freq_rank[freq[i].id] = i;
  }

  std::map<NodeId, Recommendation> by_node;
  for (const std::string& scope : scopes) {
    for (const NodeId& id : graph.scope_nodes(scope)) {
      const StepNode& s = graph.step(id);
      if (s.is_junction() || s.forced_fail) continue;
      WhatIfResult result =
          what_if(graph, scope, MitigationAction::neutralize_node(id));
      auto [it, inserted] = by_node.try_emplace(id);
      Recommendation& rec = it->second;
      if (inserted) {
        rec.action = MitigationAction::neutralize_node(id);
        rec.min_max_score_delta = result.max_score_delta;
      }
      rec.total_rows_eliminated += result.rows_eliminated;
      rec.min_max_score_delta =
          std::min(rec.min_max_score_delta, result.max_score_delta);
      rec.per_scope.emplace_back(scope, std::move(result));
    }
  }

  for (auto& [id, rec] : by_node) {
    const StepNode& s = graph.step(id);
    for (const MitigationRecord& record : catalog.records) {
      bool matches = std::any_of(
          record.tags.begin(), record.tags.end(), [&s](const std::string& t) {
            return std::binary_search(s.tags.begin(), s.tags.end(), t);
          });
      if (matches) rec.catalog_matches.push_back(record);
    }
    out.ranked.push_back(std::move(rec));
  }

  std::sort(out.ranked.begin(), out.ranked.end(),
            [&freq_rank](const Recommendation& a, const Recommendation& b) {
              if (a.total_rows_eliminated != b.total_rows_eliminated)
                return a.total_rows_eliminated > b.total_rows_eliminated;
              if (a.min_max_score_delta != b.min_max_score_delta)
                return a.min_max_score_delta < b.min_max_score_delta;
              std::size_t ra = freq_rank.count(a.action.target)
                                   ? freq_rank.at(a.action.target)
                                   : freq_rank.size();
              std::size_t rb = freq_rank.count(b.action.target)
                                   ? freq_rank.at(b.action.target)
                                   : freq_rank.size();
              if (ra != rb) return ra < rb;
              return a.action.target < b.action.target;
            });
  if (out.ranked.size() > k) out.ranked.resize(k);
  return out;
}

}  // namespace agraph
