// Acceptance suite: exercises the full analysis pipeline end to end and
// prints one PASS/FAIL line per criterion. Exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "agraph/agf.hpp"
#include "agraph/catalog.hpp"
#include "agraph/errors.hpp"
#include "agraph/graph.hpp"
#include "agraph/mitigation.hpp"
#include "agraph/scenario.hpp"
#include "agraph/table.hpp"
#include "testutil.hpp"

using namespace agraph;
using agraph::testing::data_file;
using agraph::testing::load_fixture;
using agraph::testing::mutate_text;
using agraph::testing::random_graph;
using agraph::testing::run_command;
using agraph::testing::subset_cut_oracle;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
};

using Row = std::vector<std::string>;

/// Parses the markdown table the CLI prints into cell rows.
std::vector<Row> parse_markdown_rows(const std::string& output) {
  std::vector<Row> rows;
  std::istringstream stream(output);
  std::string line;
  int line_index = 0;
  while (std::getline(stream, line)) {
    if (line.empty() || line[0] != '|') continue;
    ++line_index;
    if (line_index <= 2) continue;  // header + separator
    Row cells;
    std::string cell;
    std::istringstream cells_in(line);
    bool first = true;
    while (std::getline(cells_in, cell, '|')) {
      if (first) {
        first = false;  // leading empty field
        continue;
      }
      if (cell.empty()) continue;
      std::size_t a = cell.find_first_not_of(' ');
      std::size_t b = cell.find_last_not_of(' ');
      if (a == std::string::npos) continue;
      cells.push_back(cell.substr(a, b - a + 1));
    }
    if (!cells.empty()) rows.push_back(cells);
  }
  return rows;
}

/// Reference rows: S/F pattern -> (norm cell, published integer percent).
using ExpectedRows = std::map<std::string, std::pair<std::string, int>>;

Check check_cli_table(const std::string& scope, const ExpectedRows& expected) {
  Check check;
  auto started = std::chrono::steady_clock::now();
  auto result = run_command(agraph::testing::cli_path() + " scenarios '" +
                            data_file("figure2.agf") + "' --scope " + scope +
                            " --goal-display paper");
  auto elapsed = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - started)
                     .count();
  check.require(result.exit_code == 0, "CLI exited with code " +
                                           std::to_string(result.exit_code));
  if (!check.ok) return check;

  std::vector<Row> rows = parse_markdown_rows(result.output);
  check.require(rows.size() == expected.size(),
                "expected " + std::to_string(expected.size()) + " rows, got " +
                    std::to_string(rows.size()));
  std::set<std::string> seen;
  for (const Row& row : rows) {
    if (row.size() < 3) {
      check.require(false, "malformed row");
      break;
    }
    std::string pattern;
    for (std::size_t i = 0; i + 2 < row.size(); ++i) pattern += row[i][0];
    auto it = expected.find(pattern);
    if (it == expected.end()) {
      check.require(false, "unexpected row pattern " + pattern);
      break;
    }
    seen.insert(pattern);
    const std::string& norm = row[row.size() - 2];
    check.require(norm == it->second.first,
                  pattern + ": norm " + norm + " != " + it->second.first);
    std::string goal = row.back();
    if (!goal.empty() && goal.back() == '%') goal.pop_back();
    int goal_int = std::stoi(goal);
    check.require(std::abs(goal_int - it->second.second) <= 1,
                  pattern + ": goal " + std::to_string(goal_int) +
                      " not within 1 of " + std::to_string(it->second.second));
  }
  check.require(seen.size() == expected.size(), "duplicate or missing patterns");
  check.require(elapsed < 1.0, "took " + std::to_string(elapsed) + "s");
  return check;
}

Check criterion1() {
  return check_cli_table("blueover", ExpectedRows{
                                         {"SSSSS", {"8/8", 100}},
                                         {"SSSSF", {"6/8", 75}},
                                         {"SSSFS", {"7/8", 87}},
                                         {"SSFSS", {"6/8", 75}},
                                         {"SSFSF", {"4/8", 50}},
                                         {"SSFFS", {"5/8", 63}},
                                     });
}

Check criterion2() {
  return check_cli_table("reflection", ExpectedRows{
                                           {"SSSS", {"8/8", 100}},
                                           {"SSSF", {"6/8", 75}},
                                           {"SSFS", {"7/8", 87}},
                                       });
}

Check criterion3() {
  Check check;
  AttackGraph g = load_fixture("figure2.agf");
  check.require(
      enumerate_scenarios(g.neutralize({NodeId("get_dev_add")}), "blueover")
          .rows.empty(),
      "blueover survives losing get_dev_add");
  check.require(
      enumerate_scenarios(g.neutralize({NodeId("get_dev_add")}), "reflection")
          .rows.empty(),
      "reflection survives losing get_dev_add");
  check.require(
      enumerate_scenarios(g.neutralize({NodeId("access_at_comm")}), "blueover")
          .rows.empty(),
      "blueover survives losing access_at_comm");
  check.require(
      enumerate_scenarios(g.neutralize({NodeId("no_encryption")}), "reflection")
          .rows.empty(),
      "reflection survives losing no_encryption");
  return check;
}

Check criterion4() {
  Check check;
  auto started = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260809);
  for (int i = 0; i < 500; ++i) {
    auto generated = random_graph(rng, 12);
    ScenarioTable fast = enumerate_scenarios(generated.graph, generated.scope);
    ScenarioTable slow = brute_force_oracle(generated.graph, generated.scope);
    if (!(fast == slow)) {
      check.require(false, "mismatch at graph " + std::to_string(i));
      return check;
    }
  }
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  check.require(elapsed < 60.0, "took " + std::to_string(elapsed) + "s");
  return check;
}

Check criterion5() {
  Check check;
  std::mt19937_64 rng(50805);
  for (int i = 0; i < 200; ++i) {
    auto generated = random_graph(rng, 12);
    std::size_t rows =
        enumerate_scenarios(generated.graph, generated.scope).rows.size();
    std::size_t expected = (std::size_t{1} << generated.soft.size()) *
                           ((std::size_t{1} << generated.terminal.size()) - 1);
    check.require(rows == expected,
                  "row-count law broken at graph " + std::to_string(i));
  }
  AttackGraph g = load_fixture("figure2.agf");
  check.require(enumerate_scenarios(g, "blueover").rows.size() == 6,
                "blueover must have 6 rows");
  check.require(enumerate_scenarios(g, "reflection").rows.size() == 3,
                "reflection must have 3 rows");
  return check;
}

Check criterion6() {
  Check check;
  AttackGraph g = load_fixture("figure2.agf");
  std::vector<ScenarioTable> tables = {enumerate_scenarios(g, "blueover"),
                                       enumerate_scenarios(g, "reflection")};
  std::vector<NodeFrequency> ranked = node_frequency(tables);
  check.require(!ranked.empty() && ranked[0].id == NodeId("get_dev_add"),
                "get_dev_add is not ranked first");
  check.require(ranked[0].s_count == 9, "get_dev_add should appear in 9 rows");

  std::map<NodeId, NodeFrequency> by_id;
  for (const NodeFrequency& f : ranked) by_id[f.id] = f;
  check.require(by_id.at(NodeId("social_eng")).weighted_count >=
                    by_id.at(NodeId("physical")).weighted_count,
                "social_eng ranks below physical in weighted count");
  return check;
}

Check criterion7() {
  Check check;
  AttackGraph g = load_fixture("figure2.agf");
  std::vector<CutSet> cuts = minimal_cut_sets(g, "blueover", 5);
  std::vector<std::vector<NodeId>> expected = {
      {NodeId("access_at_comm")},
      {NodeId("get_dev_add")},
      {NodeId("physical"), NodeId("social_eng")}};
  check.require(cuts.size() == expected.size(), "wrong number of cut sets");
  for (std::size_t i = 0; i < cuts.size() && check.ok; ++i) {
    check.require(cuts[i].nodes == expected[i], "cut set mismatch");
  }
  check.require(subset_cut_oracle(g, "blueover", 5) == expected,
                "subset oracle disagrees on blueover");

  std::mt19937_64 rng(7077);
  for (int i = 0; i < 100 && check.ok; ++i) {
    auto generated = random_graph(rng, 10);
    std::size_t max_size = generated.graph.scope_nodes(generated.scope).size();
    std::vector<CutSet> got =
        minimal_cut_sets(generated.graph, generated.scope, max_size);
    std::vector<std::vector<NodeId>> oracle =
        subset_cut_oracle(generated.graph, generated.scope, max_size);
    check.require(got.size() == oracle.size(),
                  "cut-set count mismatch at graph " + std::to_string(i));
    for (std::size_t c = 0; c < got.size() && check.ok; ++c) {
      check.require(got[c].nodes == oracle[c],
                    "cut-set mismatch at graph " + std::to_string(i));
    }
  }
  return check;
}

Check criterion8() {
  Check check;
  std::mt19937_64 rng(888);

  auto verify_table = [&check](const AttackGraph& graph,
                               const std::string& scope) {
    ScenarioTable table = enumerate_scenarios(graph, scope);
    for (const Scenario& base : table.rows) {
      for (const auto& [id, outcome] : base.assignment) {
        if (outcome == Outcome::success) continue;
        auto flipped = base.assignment;
        flipped[id] = Outcome::success;
        Scenario next = score_scenario(graph, scope, flipped);
        check.require(next.admissible, "flip broke admissibility");
        check.require(next.score >= base.score, "flip lowered the score");
      }
    }
  };

  AttackGraph g = load_fixture("figure2.agf");
  verify_table(g, "blueover");
  verify_table(g, "reflection");
  verify_table(load_fixture("blueover.agf"), "blueover");
  verify_table(load_fixture("reflection.agf"), "reflection");
  for (int i = 0; i < 200 && check.ok; ++i) {
    auto generated = random_graph(rng, 8);
    verify_table(generated.graph, generated.scope);
  }
  return check;
}

Check criterion9() {
  Check check;
  std::mt19937_64 rng(99999);

  for (const char* name : {"blueover.agf", "reflection.agf", "figure2.agf"}) {
    AttackGraph g = load_fixture(name);
    ParseResult again = parse_agf(emit_agf(g));
    check.require(again.ok() && *again.graph == g,
                  std::string("fixture round-trip failed: ") + name);
  }

  for (int i = 0; i < 500 && check.ok; ++i) {
    AttackGraph g = random_graph(rng).graph;
    ParseResult again = parse_agf(emit_agf(g));
    check.require(again.ok(), "generated document failed to parse");
    if (again.ok()) {
      check.require(*again.graph == g,
                    "generated document round-trip mismatch");
    }
  }

  for (int i = 0; i < 500 && check.ok; ++i) {
    std::string text = mutate_text(emit_agf(random_graph(rng).graph), rng);
    ParseResult result = parse_agf(text);  // must not crash or hang
    check.require(result.ok() || result.has_errors(),
                  "parser returned neither a graph nor an error");
  }
  return check;
}

Check criterion10() {
  Check check;
  const Catalog& catalog = bundled_catalog();
  int bluetooth = 0, android = 0;
  for (const MitigationRecord& r : catalog.records) {
    (r.surface == Surface::bluetooth ? bluetooth : android) += 1;
  }
  check.require(bluetooth == 12, "expected 12 bluetooth records");
  check.require(android == 6, "expected 6 android records");

  CatalogQuery blueover_query;
  blueover_query.name_substring = "Blueover";
  auto blueover = lookup(catalog, blueover_query);
  check.require(blueover.size() == 1 &&
                    blueover[0].mitigations ==
                        std::vector<std::string>{"Keep device address secret"},
                "Blueover mitigation text mismatch");

  CatalogQuery dos_query;
  dos_query.name_substring = "Denial of Service";
  auto dos = lookup(catalog, dos_query);
  check.require(dos.size() == 1 &&
                    dos[0].mitigations ==
                        std::vector<std::string>{"Disable Wi-Fi when not in use"},
                "Denial of Service mitigation text mismatch");
  return check;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"1 blueover table reproduction via CLI", criterion1},
      {"2 reflection table reproduction via CLI", criterion2},
      {"3 zero-probability rule for required steps", criterion3},
      {"4 oracle equivalence on 500 random graphs", criterion4},
      {"5 row-count law 2^s * (2^t - 1)", criterion5},
      {"6 criticality ranking", criterion6},
      {"7 minimal cut sets vs subset oracle", criterion7},
      {"8 monotonicity of F->S flips", criterion8},
      {"9 parse/emit round-trip and fuzz robustness", criterion9},
      {"10 catalog integrity", criterion10},
  };

  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Check check;
    try {
      check = run();
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    if (check.ok) {
      std::cout << "[PASS] criterion " << name << "\n";
    } else {
      ++failures;
      std::cout << "[FAIL] criterion " << name << " — " << check.detail << "\n";
    }
  }
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
