#include "agraph/dot.hpp"

#include <set>

namespace agraph {

namespace {

std::string dot_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

const char* role_fill(const StepNode& s) {
  if (!s.role) return "#ffffff";
  switch (*s.role) {
    case Role::mandatory: return "#f4cccc";
    case Role::soft: return "#fff2cc";
    case Role::terminal: return "#cfe2f3";
    case Role::junction: return "#d9d9d9";
  }
  return "#ffffff";
}

}  // namespace

std::string export_dot(const AttackGraph& graph, const DotOptions& options) {
  std::set<NodeId> keep;
  const bool filtered = options.scope.has_value();
  if (filtered) keep = scope_active_nodes(graph, *options.scope);

  auto visible = [&](const NodeId& id) {
    return graph.is_goal(id) || !filtered || keep.count(id) > 0;
  };

  std::string out = "digraph attack_graph {\n";
  out += "  rankdir=TB;\n";
  out += "  node [fontname=\"Helvetica\"];\n";

  out += "  " + graph.goal_id().token + " [label=\"" +
         dot_escape(graph.goal_label()) +
         "\", shape=doubleoctagon, style=filled, fillcolor=\"#b6d7a8\"];\n";

  for (const StepNode& s : graph.steps()) {  // sorted by id
    if (!visible(s.id)) continue;
    std::string attrs;
    if (s.is_junction()) {
      // Gate point: a small diamond labeled with its kind.
      std::string label = graph.gate_of(s.id) == GateKind::and_gate ? "AND" : "OR";
      attrs = "label=\"" + label +
              "\", shape=diamond, width=0.5, height=0.5, fixedsize=true";
    } else {
      std::string label =
          dot_escape(s.label) + " (w=" + std::to_string(s.weight) + ")";
      if (graph.predecessors(s.id).size() >= 2) {
        label += std::string("\\n[") +
                 (graph.gate_of(s.id) == GateKind::and_gate ? "AND" : "OR") +
                 "]";
      }
      attrs = "label=\"" + label + "\", shape=box";
    }
    attrs += std::string(", style=filled, fillcolor=\"") + role_fill(s) + "\"";
    if (s.forced_fail)
      attrs += ", color=\"#999999\", fontcolor=\"#999999\", penwidth=2";
    out += "  " + s.id.token + " [" + attrs + "];\n";
  }

  for (const Edge& e : graph.edges()) {  // sorted
    if (!visible(e.from) || !visible(e.to)) continue;
    out += "  " + e.from.token + " -> " + e.to.token + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace agraph
