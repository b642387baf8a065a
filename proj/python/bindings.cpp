#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "agraph/agf.hpp"
#include "agraph/catalog.hpp"
#include "agraph/dot.hpp"
#include "agraph/errors.hpp"
#include "agraph/graph.hpp"
#include "agraph/mitigation.hpp"
#include "agraph/scenario.hpp"
#include "agraph/table.hpp"

namespace py = pybind11;
using namespace agraph;

namespace {

py::object to_fraction(const Ratio& r) {
  static py::object fraction_type =
      py::module_::import("fractions").attr("Fraction");
  return fraction_type(r.numerator(), r.denominator());
}

std::string diagnostics_text(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream out;
  for (const Diagnostic& d : diagnostics) {
    if (d.severity != Severity::error) continue;
    out << "[" << d.code << "]";
    if (d.line > 0) out << " line " << d.line;
    out << ": " << d.message << "\n";
  }
  return out.str();
}

py::dict diagnostic_dict(const Diagnostic& d) {
  py::dict out;
  out["severity"] = d.severity == Severity::error ? "error" : "warning";
  out["line"] = d.line;
  out["column"] = d.column;
  out["code"] = d.code;
  out["message"] = d.message;
  return out;
}

AttackGraph load_from_text(const std::string& text) {
  ParseResult result = parse_agf(text);
  if (!result.graph)
    throw py::value_error("invalid graph:\n" +
                          diagnostics_text(result.diagnostics));
  return std::move(*result.graph);
}

AttackGraph load_from_file(const std::string& path) {
  ParseResult result = parse_agf_file(path);
  if (!result.graph)
    throw py::value_error("invalid graph (" + path + "):\n" +
                          diagnostics_text(result.diagnostics));
  return std::move(*result.graph);
}

std::map<NodeId, Outcome> assignment_from_dict(const py::dict& d) {
  std::map<NodeId, Outcome> out;
  for (auto item : d) {
    std::string key = py::cast<std::string>(item.first);
    Outcome outcome;
    if (py::isinstance<py::bool_>(item.second)) {
      outcome = py::cast<bool>(item.second) ? Outcome::success : Outcome::failure;
    } else {
      std::string v = py::cast<std::string>(item.second);
      if (v == "S" || v == "s") outcome = Outcome::success;
      else if (v == "F" || v == "f") outcome = Outcome::failure;
      else throw py::value_error("outcome must be 'S', 'F' or a bool");
    }
    out.emplace(NodeId(key), outcome);
  }
  return out;
}

py::dict assignment_to_dict(const Scenario& s) {
  py::dict out;
  for (const auto& [id, outcome] : s.assignment) {
    out[py::str(id.token)] = outcome == Outcome::success ? "S" : "F";
  }
  return out;
}

GoalDisplay display_from_string(const std::string& name) {
  auto mode = goal_display_from_name(name);
  if (!mode) throw py::value_error("goal display must be exact|decimal|paper");
  return *mode;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted AND/OR attack-graph analysis core";

  py::register_exception<Error>(m, "AnalysisError");
  py::register_exception<ValidationFailure>(m, "GraphInvalid");

  py::class_<StepNode>(m, "Step")
      .def_readonly("label", &StepNode::label)
      .def_readonly("weight", &StepNode::weight)
      .def_readonly("tags", &StepNode::tags)
      .def_readonly("forced_fail", &StepNode::forced_fail)
      .def_property_readonly("id",
                             [](const StepNode& s) { return s.id.token; })
      .def_property_readonly("role", [](const StepNode& s) -> py::object {
        if (!s.role) return py::none();
        return py::str(role_name(*s.role));
      });

  py::class_<AttackGraph>(m, "AttackGraph")
      .def_property_readonly(
          "goal", [](const AttackGraph& g) { return g.goal_id().token; })
      .def_property_readonly("goal_label",
                             [](const AttackGraph& g) { return g.goal_label(); })
      .def_property_readonly("steps",
                             [](const AttackGraph& g) { return g.steps(); })
      .def_property_readonly("scopes",
                             [](const AttackGraph& g) {
                               std::vector<std::string> names;
                               for (const auto& [name, nodes] : g.scopes()) {
                                 (void)nodes;
                                 names.push_back(name);
                               }
                               return names;
                             })
      .def("scope_nodes",
           [](const AttackGraph& g, const std::string& scope) {
             std::vector<std::string> out;
             for (const NodeId& id : g.scope_nodes(scope))
               out.push_back(id.token);
             return out;
           })
      .def("neutralize",
           [](const AttackGraph& g, const std::vector<std::string>& ids) {
             std::vector<NodeId> nodes;
             for (const std::string& id : ids) nodes.emplace_back(id);
             return g.neutralize(nodes);
           })
      .def("reduce_weight",
           [](const AttackGraph& g, const std::string& id, int new_weight) {
             return g.reduce_weight(NodeId(id), new_weight);
           })
      .def("emit", [](const AttackGraph& g) { return emit_agf(g); })
      .def(
          "to_dot",
          [](const AttackGraph& g, std::optional<std::string> scope) {
            DotOptions options;
            options.scope = std::move(scope);
            return export_dot(g, options);
          },
          py::arg("scope") = py::none())
      .def("__eq__",
           [](const AttackGraph& a, const AttackGraph& b) { return a == b; });

  py::class_<ScenarioColumn>(m, "Column")
      .def_property_readonly(
          "id", [](const ScenarioColumn& c) { return c.id.token; })
      .def_readonly("label", &ScenarioColumn::label)
      .def_readonly("weight", &ScenarioColumn::weight);

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("assignment", &assignment_to_dict)
      .def_readonly("achieved_weight", &Scenario::achieved_weight)
      .def_readonly("total_weight", &Scenario::total_weight)
      .def_readonly("admissible", &Scenario::admissible)
      .def_property_readonly(
          "score", [](const Scenario& s) { return to_fraction(s.score); })
      .def_property_readonly("success_probability", [](const Scenario& s) {
        return to_fraction(s.success_probability());
      });

  py::class_<ScenarioTable>(m, "ScenarioTable")
      .def_readonly("scope", &ScenarioTable::scope)
      .def_readonly("columns", &ScenarioTable::columns)
      .def_readonly("rows", &ScenarioTable::rows)
      .def("pattern", &ScenarioTable::pattern)
      .def("__len__",
           [](const ScenarioTable& t) { return t.rows.size(); })
      .def("__eq__", [](const ScenarioTable& a, const ScenarioTable& b) {
        return a == b;
      });

  py::class_<MitigationRecord>(m, "MitigationRecord")
      .def_readonly("attack_name", &MitigationRecord::attack_name)
      .def_readonly("authors", &MitigationRecord::authors)
      .def_readonly("mitigations", &MitigationRecord::mitigations)
      .def_readonly("tags", &MitigationRecord::tags)
      .def_property_readonly("surface", [](const MitigationRecord& r) {
        return std::string(surface_name(r.surface));
      });

  py::class_<Catalog>(m, "Catalog")
      .def_readonly("records", &Catalog::records)
      .def_readonly("source", &Catalog::source)
      .def("__len__", [](const Catalog& c) { return c.records.size(); });

  py::class_<MitigationAction>(m, "MitigationAction")
      .def_property_readonly(
          "kind",
          [](const MitigationAction& a) {
            return a.kind == MitigationKind::neutralize ? "neutralize"
                                                        : "reduce_weight";
          })
      .def_property_readonly(
          "target", [](const MitigationAction& a) { return a.target.token; })
      .def_readonly("new_weight", &MitigationAction::new_weight);

  py::class_<WhatIfResult>(m, "WhatIfResult")
      .def_readonly("action", &WhatIfResult::action)
      .def_readonly("before", &WhatIfResult::before)
      .def_readonly("after", &WhatIfResult::after)
      .def_readonly("rows_eliminated", &WhatIfResult::rows_eliminated)
      .def_property_readonly("max_score_delta",
                             [](const WhatIfResult& r) {
                               return to_fraction(r.max_score_delta);
                             })
      .def_property_readonly("mean_score_delta", [](const WhatIfResult& r) {
        return to_fraction(r.mean_score_delta);
      });

  py::class_<Recommendation>(m, "Recommendation")
      .def_readonly("action", &Recommendation::action)
      .def_readonly("total_rows_eliminated",
                    &Recommendation::total_rows_eliminated)
      .def_readonly("catalog_matches", &Recommendation::catalog_matches)
      .def_readonly("per_scope", &Recommendation::per_scope)
      .def_property_readonly("min_max_score_delta",
                             [](const Recommendation& r) {
                               return to_fraction(r.min_max_score_delta);
                             });

  m.def("load", &load_from_text, py::arg("text"),
        "Parse .agf text into a validated AttackGraph");
  m.def("load_file", &load_from_file, py::arg("path"));
  m.def(
      "validate_text",
      [](const std::string& text) {
        ParseResult result = parse_agf(text);
        py::list out;
        for (const Diagnostic& d : result.diagnostics)
          out.append(diagnostic_dict(d));
        return out;
      },
      py::arg("text"), "Diagnostics for .agf text; empty when fully valid");

  m.def("enumerate_scenarios", &enumerate_scenarios, py::arg("graph"),
        py::arg("scope"));
  m.def("brute_force_oracle", &brute_force_oracle, py::arg("graph"),
        py::arg("scope"));
  m.def(
      "score_scenario",
      [](const AttackGraph& g, const std::string& scope, const py::dict& d) {
        return score_scenario(g, scope, assignment_from_dict(d));
      },
      py::arg("graph"), py::arg("scope"), py::arg("assignment"));
  m.def(
      "goal_percentage",
      [](py::object score, const std::string& mode) {
        auto num = py::cast<std::int64_t>(score.attr("numerator"));
        auto den = py::cast<std::int64_t>(score.attr("denominator"));
        return goal_percentage(Ratio(num, den), display_from_string(mode));
      },
      py::arg("score"), py::arg("mode") = "paper");
  m.def(
      "enumerate_chains",
      [](const AttackGraph& g, const std::string& scope) {
        std::vector<std::vector<std::string>> out;
        for (const Chain& chain : enumerate_chains(g, scope)) {
          std::vector<std::string> nodes;
          for (const NodeId& id : chain.nodes) nodes.push_back(id.token);
          out.push_back(std::move(nodes));
        }
        return out;
      },
      py::arg("graph"), py::arg("scope"));
  m.def(
      "chain_average_risk",
      [](const AttackGraph& g, const std::vector<std::string>& nodes) {
        Chain chain;
        for (const std::string& id : nodes) chain.nodes.emplace_back(id);
        return to_fraction(chain_average_risk(g, chain));
      },
      py::arg("graph"), py::arg("chain"));
  m.def(
      "node_frequency",
      [](const std::vector<ScenarioTable>& tables) {
        py::list out;
        for (const NodeFrequency& f : node_frequency(tables)) {
          py::dict entry;
          entry["id"] = f.id.token;
          entry["s_count"] = f.s_count;
          entry["weighted_count"] = f.weighted_count;
          entry["scopes"] = f.scopes;
          out.append(entry);
        }
        return out;
      },
      py::arg("tables"));
  m.def(
      "minimal_cut_sets",
      [](const AttackGraph& g, const std::string& scope,
         std::optional<std::size_t> max_size) {
        std::size_t limit =
            max_size.value_or(g.scope_nodes(scope).size());
        std::vector<std::vector<std::string>> out;
        for (const CutSet& cut : minimal_cut_sets(g, scope, limit)) {
          std::vector<std::string> nodes;
          for (const NodeId& id : cut.nodes) nodes.push_back(id.token);
          out.push_back(std::move(nodes));
        }
        return out;
      },
      py::arg("graph"), py::arg("scope"), py::arg("max_size") = py::none());
  m.def(
      "derive_roles",
      [](const AttackGraph& g) {
        RoleDerivation derived = derive_roles(g);
        py::dict roles;
        for (const auto& [id, role] : derived.roles)
          roles[py::str(id.token)] = role_name(role);
        py::list discrepancies;
        for (const auto& d : derived.discrepancies) {
          py::dict entry;
          entry["node"] = d.node.token;
          entry["declared"] = role_name(d.declared);
          entry["derived"] = role_name(d.derived);
          discrepancies.append(entry);
        }
        py::list ambiguities;
        for (const auto& a : derived.ambiguities) {
          py::dict entry;
          entry["node"] = a.node.token;
          entry[py::str(a.scope_a)] = role_name(a.role_a);
          entry[py::str(a.scope_b)] = role_name(a.role_b);
          ambiguities.append(entry);
        }
        return py::make_tuple(roles, discrepancies, ambiguities);
      },
      py::arg("graph"));

  m.def(
      "what_if",
      [](const AttackGraph& g, const std::string& scope,
         std::optional<std::string> neutralize,
         std::optional<std::pair<std::string, int>> reduce) {
        if (neutralize.has_value() == reduce.has_value())
          throw py::value_error("pass exactly one of neutralize= or reduce=");
        MitigationAction action =
            neutralize ? MitigationAction::neutralize_node(NodeId(*neutralize))
                       : MitigationAction::reduce_node_weight(
                             NodeId(reduce->first), reduce->second);
        return what_if(g, scope, action);
      },
      py::arg("graph"), py::arg("scope"), py::arg("neutralize") = py::none(),
      py::arg("reduce") = py::none());
  m.def(
      "recommend",
      [](const AttackGraph& g, const std::vector<std::string>& scopes,
         const Catalog& catalog, std::size_t k) {
        RecommendOutcome outcome = recommend(g, scopes, catalog, k);
        return py::make_tuple(outcome.ranked, outcome.warnings);
      },
      py::arg("graph"), py::arg("scopes"), py::arg("catalog"),
      py::arg("k") = 5);

  m.def("bundled_catalog", []() { return bundled_catalog(); });
  m.def(
      "load_catalog",
      [](const std::string& path) { return load_catalog(path).catalog; },
      py::arg("path"));
  m.def("serialize_catalog", &serialize_catalog, py::arg("catalog"));
  m.def(
      "lookup",
      [](const Catalog& catalog, std::optional<std::string> surface,
         std::optional<std::string> tag, std::optional<std::string> name) {
        CatalogQuery query;
        if (surface) {
          auto s = surface_from_name(*surface);
          if (!s) throw py::value_error("surface must be bluetooth or android");
          query.surface = s;
        }
        query.tag = std::move(tag);
        query.name_substring = std::move(name);
        return lookup(catalog, query);
      },
      py::arg("catalog"), py::arg("surface") = py::none(),
      py::arg("tag") = py::none(), py::arg("name") = py::none());

  m.def(
      "render_table",
      [](const ScenarioTable& table, const std::string& format,
         const std::string& goal_display) {
        auto f = table_format_from_name(format);
        if (!f) throw py::value_error("format must be md|csv|tsv");
        return render_table(table, *f, display_from_string(goal_display));
      },
      py::arg("table"), py::arg("format") = "md",
      py::arg("goal_display") = "decimal");
}
