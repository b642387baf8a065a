#pragma once

#include <optional>
#include <string>

#include "agraph/scenario.hpp"

namespace agraph {

enum class TableFormat { markdown, csv, tsv };

std::optional<TableFormat> table_format_from_name(const std::string& name);
std::optional<GoalDisplay> goal_display_from_name(const std::string& name);

/// One column per weighted node (header = label), then Norm as
/// `achieved/total`, then Goal per the display mode. Cells are `S-<w>` and
/// `F-0`. Markdown goal cells keep the trailing `%`; csv/tsv carry bare
/// numbers. CSV quotes per RFC 4180.
std::string render_table(const ScenarioTable& table, TableFormat format,
                         GoalDisplay goal_display);

}  // namespace agraph
