#include "agraph/table.hpp"

#include <algorithm>

#include "agraph/errors.hpp"

namespace agraph {

std::optional<TableFormat> table_format_from_name(const std::string& name) {
  if (name == "md" || name == "markdown") return TableFormat::markdown;
  if (name == "csv") return TableFormat::csv;
  if (name == "tsv") return TableFormat::tsv;
  return std::nullopt;
}

std::optional<GoalDisplay> goal_display_from_name(const std::string& name) {
  if (name == "exact") return GoalDisplay::exact;
  if (name == "decimal") return GoalDisplay::decimal;
  if (name == "paper") return GoalDisplay::paper;
  return std::nullopt;
}

namespace {

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string tsv_field(std::string value) {
  std::replace(value.begin(), value.end(), '\t', ' ');
  std::replace(value.begin(), value.end(), '\n', ' ');
  return value;
}

std::string strip_percent(std::string value) {
  if (!value.empty() && value.back() == '%') value.pop_back();
  return value;
}

}  // namespace

std::string render_table(const ScenarioTable& table, TableFormat format,
                         GoalDisplay goal_display) {
  std::vector<std::string> header;
  for (const ScenarioColumn& col : table.columns) {
    header.push_back(col.label.empty() ? col.id.token : col.label);
  }
  header.push_back("Norm");
  header.push_back("Goal");

  std::vector<std::vector<std::string>> rows;
  for (const Scenario& row : table.rows) {
    std::vector<std::string> cells;
    for (const ScenarioColumn& col : table.columns) {
      bool success = row.assignment.at(col.id) == Outcome::success;
      cells.push_back(success ? "S-" + std::to_string(col.weight) : "F-0");
    }
    cells.push_back(std::to_string(row.achieved_weight) + "/" +
                    std::to_string(row.total_weight));
    cells.push_back(goal_percentage(row.score, goal_display));
    rows.push_back(std::move(cells));
  }

  std::string out;
  switch (format) {
    case TableFormat::markdown: {
      auto emit_row = [&out](const std::vector<std::string>& cells) {
        out += "|";
        for (const std::string& c : cells) out += " " + c + " |";
        out += "\n";
      };
      emit_row(header);
      out += "|";
      for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
      out += "\n";
      for (const auto& cells : rows) emit_row(cells);
      return out;
    }
    case TableFormat::csv: {
      auto emit_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (i) out += ",";
          out += csv_field(cells[i]);
        }
        out += "\n";
      };
      emit_row(header);
      for (auto& cells : rows) {
        cells.back() = strip_percent(cells.back());
        emit_row(cells);
      }
      return out;
    }
    case TableFormat::tsv: {
      auto emit_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (i) out += "\t";
          out += tsv_field(cells[i]);
        }
        out += "\n";
      };
      emit_row(header);
      for (auto& cells : rows) {
        cells.back() = strip_percent(cells.back());
        emit_row(cells);
      }
      return out;
    }
  }
  raise(Errc::unsupported_format, "unsupported table format");
}

}  // namespace agraph
