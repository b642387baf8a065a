#include <doctest.h>

#include <sstream>
#include <vector>

#include "agraph/table.hpp"
#include "testutil.hpp"

using namespace agraph;
using agraph::testing::load_fixture;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

TEST_CASE("markdown table matches the published top row") {
  AttackGraph g = load_fixture("figure2.agf");
  ScenarioTable table = enumerate_scenarios(g, "blueover");
  std::string text = render_table(table, TableFormat::markdown, GoalDisplay::paper);
  std::vector<std::string> lines = lines_of(text);

  REQUIRE(lines.size() == 2 + table.rows.size());
  CHECK(lines[0] ==
        "| Access AT Comm | Get Dev Add | AT Set Aval | Physical Attack | "
        "Social Engineering | Norm | Goal |");
  CHECK(lines[2] == "| S-1 | S-2 | S-2 | S-1 | S-2 | 8/8 | 100% |");
  for (const std::string& line : lines) CHECK(line.front() == '|');
}

TEST_CASE("csv rendering: RFC 4180 quoting, bare goal numbers") {
  AttackGraph g = load_fixture("figure2.agf");
  ScenarioTable table = enumerate_scenarios(g, "reflection");
  std::string text = render_table(table, TableFormat::csv, GoalDisplay::paper);
  std::vector<std::string> lines = lines_of(text);

  REQUIRE(lines.size() == 4);  // header + three data rows
  std::size_t fields = split(lines[0], ',').size();
  CHECK(fields == table.columns.size() + 2);
  for (const std::string& line : lines) {
    CHECK(split(line, ',').size() == fields);
  }
  CHECK(lines[1] == "S-3,S-2,S-1,S-2,8/8,100");

  SUBCASE("labels containing commas or quotes are quoted") {
    ScenarioTable odd = table;
    odd.columns[0].label = "No, Encryption";
    odd.columns[1].label = "Say \"when\"";
    std::string rendered = render_table(odd, TableFormat::csv, GoalDisplay::paper);
    CHECK(lines_of(rendered)[0].substr(0, 33) ==
          "\"No, Encryption\",\"Say \"\"when\"\"\",P");
  }
}

TEST_CASE("tsv rendering uses tabs and bare numbers") {
  AttackGraph g = load_fixture("figure2.agf");
  ScenarioTable table = enumerate_scenarios(g, "reflection");
  std::string text = render_table(table, TableFormat::tsv, GoalDisplay::decimal);
  std::vector<std::string> lines = lines_of(text);
  CHECK(split(lines[1], '\t').back() == "100.0");
  CHECK(split(lines[0], '\t').size() == table.columns.size() + 2);
}

TEST_CASE("markdown and csv carry identical cell contents") {
  AttackGraph g = load_fixture("figure2.agf");
  for (const char* scope : {"blueover", "reflection"}) {
    ScenarioTable table = enumerate_scenarios(g, scope);
    std::vector<std::string> md =
        lines_of(render_table(table, TableFormat::markdown, GoalDisplay::exact));
    std::vector<std::string> csv =
        lines_of(render_table(table, TableFormat::csv, GoalDisplay::exact));
    REQUIRE(md.size() == csv.size() + 1);  // separator row
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      std::vector<std::string> md_cells = split(md[r + 2], '|');
      std::vector<std::string> csv_cells = split(csv[r + 1], ',');
      // Strip the leading empty field and surrounding spaces from markdown.
      std::vector<std::string> cleaned;
      for (const std::string& cell : md_cells) {
        if (cell.empty()) continue;
        std::string trimmed = cell.substr(1, cell.size() - 2);
        cleaned.push_back(trimmed);
      }
      REQUIRE(cleaned.size() == csv_cells.size());
      for (std::size_t c = 0; c + 1 < cleaned.size(); ++c) {
        CHECK(cleaned[c] == csv_cells[c]);
      }
      CHECK(cleaned.back() == csv_cells.back() + "%");
    }
  }
}

TEST_CASE("empty table renders a header and no rows") {
  AttackGraph g = load_fixture("figure2.agf");
  ScenarioTable empty =
      enumerate_scenarios(g.neutralize({NodeId("get_dev_add")}), "blueover");
  REQUIRE(empty.rows.empty());

  std::vector<std::string> md =
      lines_of(render_table(empty, TableFormat::markdown, GoalDisplay::paper));
  CHECK(md.size() == 2);  // header + separator
  std::vector<std::string> csv =
      lines_of(render_table(empty, TableFormat::csv, GoalDisplay::paper));
  CHECK(csv.size() == 1);
}
