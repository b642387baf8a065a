#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <unistd.h>

#include "agraph/agf.hpp"
#include "agraph/catalog.hpp"
#include "agraph/dot.hpp"
#include "agraph/errors.hpp"
#include "agraph/graph.hpp"
#include "agraph/mitigation.hpp"
#include "agraph/scenario.hpp"
#include "agraph/table.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitUsage = 2;

struct GlobalFlags {
  bool quiet = false;
  bool no_color = false;
};

bool use_color(const GlobalFlags& flags) {
  return !flags.no_color && isatty(fileno(stderr));
}

void print_diagnostic(const agraph::Diagnostic& d, const GlobalFlags& flags) {
  if (flags.quiet && d.severity == agraph::Severity::warning) return;
  const bool color = use_color(flags);
  const char* tag = d.severity == agraph::Severity::error ? "error" : "warning";
  const char* open = d.severity == agraph::Severity::error ? "\033[31m" : "\033[33m";
  std::cerr << (color ? open : "") << tag << (color ? "\033[0m" : "") << " ["
            << d.code << "]";
  if (d.line > 0) {
    std::cerr << " line " << d.line;
    if (d.column > 0) std::cerr << ":" << d.column;
  }
  std::cerr << ": " << d.message << "\n";
}

/// Loads a graph or exits with code 1 after printing diagnostics.
agraph::AttackGraph load_graph(const std::string& path,
                               const GlobalFlags& flags) {
  agraph::ParseResult result = agraph::parse_agf_file(path);
  for (const agraph::Diagnostic& d : result.diagnostics)
    print_diagnostic(d, flags);
  if (!result.graph) std::exit(kExitDomainError);
  return std::move(*result.graph);
}

agraph::Catalog active_catalog() {
  const char* override_path = std::getenv("AGRAPH_CATALOG");
  if (override_path && *override_path) {
    return agraph::load_catalog(override_path).catalog;
  }
  return agraph::bundled_catalog();
}

agraph::TableFormat parse_format(const std::string& name) {
  auto format = agraph::table_format_from_name(name);
  if (!format)
    agraph::raise(agraph::Errc::unsupported_format,
                  "unsupported table format '" + name + "'");
  return *format;
}

agraph::GoalDisplay parse_display(const std::string& name) {
  auto display = agraph::goal_display_from_name(name);
  if (!display)
    agraph::raise(agraph::Errc::invalid_argument,
                  "unsupported goal display '" + name + "'");
  return *display;
}

void print_whatif_summary(const agraph::WhatIfResult& result) {
  std::cout << "rows_before: " << result.before.rows.size() << "\n"
            << "rows_after: " << result.after.rows.size() << "\n"
            << "rows_eliminated: " << result.rows_eliminated << "\n"
            << "max_score_delta: "
            << agraph::fraction_string(result.max_score_delta) << "\n"
            << "mean_score_delta: "
            << agraph::fraction_string(result.mean_score_delta) << "\n";
}

void print_record(const agraph::MitigationRecord& record) {
  std::cout << record.attack_name << " [" << surface_name(record.surface)
            << "]\n";
  std::cout << "  authors: ";
  for (std::size_t i = 0; i < record.authors.size(); ++i) {
    if (i) std::cout << "; ";
    std::cout << record.authors[i];
  }
  std::cout << "\n  mitigations: ";
  for (std::size_t i = 0; i < record.mitigations.size(); ++i) {
    if (i) std::cout << "; ";
    std::cout << record.mitigations[i];
  }
  std::cout << "\n  tags: ";
  for (std::size_t i = 0; i < record.tags.size(); ++i) {
    if (i) std::cout << ",";
    std::cout << record.tags[i];
  }
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted AND/OR attack-graph analysis"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand too
  GlobalFlags flags;
  app.add_flag("--quiet", flags.quiet, "Suppress warnings and informational output");
  app.add_flag("--no-color", flags.no_color, "Disable colored diagnostics");

  std::string file, scope, format_name = "md", display_name = "decimal";
  std::vector<std::string> scope_list;

  auto* validate_cmd =
      app.add_subcommand("validate", "Check a graph file; exit 0 when valid");
  validate_cmd->add_option("file", file, "Graph file (.agf)")->required();

  auto* scenarios_cmd =
      app.add_subcommand("scenarios", "Print the admissible scenario table of a scope");
  scenarios_cmd->add_option("file", file)->required();
  scenarios_cmd->add_option("--scope", scope, "Attack scope name")->required();
  scenarios_cmd->add_option("--format", format_name, "md|csv|tsv")
      ->check(CLI::IsMember({"md", "markdown", "csv", "tsv"}));
  scenarios_cmd->add_option("--goal-display", display_name, "exact|decimal|paper")
      ->check(CLI::IsMember({"exact", "decimal", "paper"}));

  auto* critical_cmd =
      app.add_subcommand("critical", "Rank nodes by how often they must succeed");
  critical_cmd->add_option("file", file)->required();
  critical_cmd->add_option("--scope", scope_list, "Scope (repeatable; default: all)");

  auto* cuts_cmd =
      app.add_subcommand("cuts", "Minimal node sets whose neutralization blocks the scope");
  cuts_cmd->add_option("file", file)->required();
  cuts_cmd->add_option("--scope", scope)->required();
  int max_size = 0;
  cuts_cmd->add_option("--max-size", max_size, "Largest cut-set size (default: scope size)");

  auto* whatif_cmd =
      app.add_subcommand("whatif", "Evaluate one mitigation against a scope");
  whatif_cmd->add_option("file", file)->required();
  whatif_cmd->add_option("--scope", scope)->required();
  std::string neutralize_id, reduce_arg;
  auto* neutralize_opt =
      whatif_cmd->add_option("--neutralize", neutralize_id, "Step to force-fail");
  auto* reduce_opt =
      whatif_cmd->add_option("--reduce", reduce_arg, "id=w: lower a step's weight");
  neutralize_opt->excludes(reduce_opt);
  whatif_cmd->add_option("--format", format_name, "md|csv|tsv")
      ->check(CLI::IsMember({"md", "markdown", "csv", "tsv"}));
  whatif_cmd->add_option("--goal-display", display_name, "exact|decimal|paper")
      ->check(CLI::IsMember({"exact", "decimal", "paper"}));

  auto* dot_cmd = app.add_subcommand("dot", "Emit Graphviz DOT");
  dot_cmd->add_option("file", file)->required();
  dot_cmd->add_option("--scope", scope, "Restrict to one scope's subgraph");

  auto* catalog_cmd =
      app.add_subcommand("catalog", "Query the attack/mitigation knowledge base");
  std::string surface_filter, name_filter, tag_filter;
  catalog_cmd->add_option("--surface", surface_filter, "bluetooth|android")
      ->check(CLI::IsMember({"bluetooth", "android"}));
  catalog_cmd->add_option("--name", name_filter, "Attack-name substring");
  catalog_cmd->add_option("--tag", tag_filter, "Exact tag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) {
      agraph::AttackGraph graph = load_graph(file, flags);
      if (!flags.quiet) {
        std::cout << "valid: " << graph.steps().size() << " steps, "
                  << graph.edges().size() << " edges, "
                  << graph.scopes().size() << " scopes\n";
      }
      return kExitOk;
    }

    if (scenarios_cmd->parsed()) {
      agraph::AttackGraph graph = load_graph(file, flags);
      agraph::ScenarioTable table = agraph::enumerate_scenarios(graph, scope);
      std::cout << agraph::render_table(table, parse_format(format_name),
                                        parse_display(display_name));
      return kExitOk;
    }

    if (critical_cmd->parsed()) {
      agraph::AttackGraph graph = load_graph(file, flags);
      if (scope_list.empty()) {
        for (const auto& [name, members] : graph.scopes()) scope_list.push_back(name);
      }
      std::vector<agraph::ScenarioTable> tables;
      for (const std::string& name : scope_list)
        tables.push_back(agraph::enumerate_scenarios(graph, name));
      std::size_t rank = 0;
      for (const agraph::NodeFrequency& f : agraph::node_frequency(tables)) {
        std::cout << ++rank << " " << f.id.token << " s_count=" << f.s_count
                  << " weighted=" << f.weighted_count << " scopes=";
        for (std::size_t i = 0; i < f.scopes.size(); ++i) {
          if (i) std::cout << ",";
          std::cout << f.scopes[i];
        }
        std::cout << "\n";
      }
      return kExitOk;
    }

    if (cuts_cmd->parsed()) {
      agraph::AttackGraph graph = load_graph(file, flags);
      std::size_t limit = max_size > 0
                              ? static_cast<std::size_t>(max_size)
                              : graph.scope_nodes(scope).size();
      for (const agraph::CutSet& cut :
           agraph::minimal_cut_sets(graph, scope, limit)) {
        std::cout << "{";
        for (std::size_t i = 0; i < cut.nodes.size(); ++i) {
          if (i) std::cout << ", ";
          std::cout << cut.nodes[i].token;
        }
        std::cout << "}\n";
      }
      return kExitOk;
    }

    if (whatif_cmd->parsed()) {
      agraph::AttackGraph graph = load_graph(file, flags);
      agraph::MitigationAction action;
      if (!neutralize_id.empty()) {
        action = agraph::MitigationAction::neutralize_node(
            agraph::NodeId(neutralize_id));
      } else if (!reduce_arg.empty()) {
        std::size_t eq = reduce_arg.find('=');
        if (eq == std::string::npos) {
          std::cerr << "error: --reduce expects <id>=<weight>\n";
          return kExitUsage;
        }
        int new_weight = 0;
        try {
          new_weight = std::stoi(reduce_arg.substr(eq + 1));
        } catch (const std::exception&) {
          std::cerr << "error: --reduce expects an integer weight\n";
          return kExitUsage;
        }
        action = agraph::MitigationAction::reduce_node_weight(
            agraph::NodeId(reduce_arg.substr(0, eq)), new_weight);
      } else {
        std::cerr << "error: whatif needs --neutralize or --reduce\n";
        return kExitUsage;
      }
      agraph::WhatIfResult result = agraph::what_if(graph, scope, action);
      print_whatif_summary(result);
      std::cout << agraph::render_table(result.after,
                                        parse_format(format_name),
                                        parse_display(display_name));
      return kExitOk;
    }

    if (dot_cmd->parsed()) {
      agraph::AttackGraph graph = load_graph(file, flags);
      agraph::DotOptions options;
      if (!scope.empty()) options.scope = scope;
      std::cout << agraph::export_dot(graph, options);
      return kExitOk;
    }

    if (catalog_cmd->parsed()) {
      agraph::Catalog catalog = active_catalog();
      agraph::CatalogQuery query;
      if (!surface_filter.empty()) {
        auto surface = agraph::surface_from_name(surface_filter);
        if (!surface) {
          std::cerr << "error: --surface must be bluetooth or android\n";
          return kExitUsage;
        }
        query.surface = surface;
      }
      if (!name_filter.empty()) query.name_substring = name_filter;
      if (!tag_filter.empty()) query.tag = tag_filter;
      std::vector<agraph::MitigationRecord> records =
          agraph::lookup(catalog, query);
      for (const agraph::MitigationRecord& r : records) print_record(r);
      if (!flags.quiet)
        std::cerr << records.size() << " of " << catalog.records.size()
                  << " records matched\n";
      return kExitOk;
    }
  } catch (const agraph::Error& e) {
    std::cerr << "error [" << agraph::errc_name(e.code()) << "]: " << e.what()
              << "\n";
    return kExitDomainError;
  } catch (const agraph::ValidationFailure& e) {
    for (const agraph::Violation& v : e.violations()) {
      std::cerr << "error [" << agraph::violation_code_name(v.code)
                << "]: " << v.message << "\n";
    }
    return kExitDomainError;
  }
  return kExitUsage;
}
