#include "agraph/agf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace agraph {

namespace {

constexpr int kFormatVersion = 1;
constexpr int kMaxWeight = 1'000'000;  // keeps all score arithmetic in int64

struct Cursor {
  const std::string& line;
  int line_no;
  std::size_t pos = 0;

  int column() const { return static_cast<int>(pos) + 1; }
  bool at_end() const {
    std::size_t p = pos;
    while (p < line.size() && (line[p] == ' ' || line[p] == '\t')) ++p;
    return p >= line.size();
  }
  void skip_ws() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }
  char peek() const { return pos < line.size() ? line[pos] : '\0'; }
};

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-';
}

/// Collects everything that happened while scanning one document.
struct ParserState {
  std::vector<Diagnostic> diagnostics;
  bool failed = false;

  GraphDefinition def;
  bool have_goal = false;
  std::map<NodeId, int> node_lines;
  std::map<std::string, int> scope_lines;

  void error(int line, int column, std::string code, std::string message) {
    failed = true;
    diagnostics.push_back(Diagnostic{Severity::error, line, column,
                                     std::move(code), std::move(message)});
  }
  void warn(int line, std::string code, std::string message) {
    diagnostics.push_back(Diagnostic{Severity::warning, line, 0,
                                     std::move(code), std::move(message)});
  }
};

/// Reads a bare word. Returns false (with a diagnostic) when none is there.
bool read_word(Cursor& c, ParserState& st, const char* what, std::string& out) {
  c.skip_ws();
  std::size_t start = c.pos;
  while (c.pos < c.line.size() && is_word_char(c.line[c.pos])) ++c.pos;
  if (c.pos == start) {
    st.error(c.line_no, c.column(), "syntax_error",
             std::string("expected ") + what);
    return false;
  }
  out = c.line.substr(start, c.pos - start);
  return true;
}

bool read_id(Cursor& c, ParserState& st, const char* what, NodeId& out) {
  c.skip_ws();
  int col = c.column();
  std::string word;
  if (!read_word(c, st, what, word)) return false;
  if (!NodeId::valid_token(word)) {
    st.error(c.line_no, col, "invalid_identifier",
             std::string(what) + " '" + word +
                 "' must match [a-z0-9_]+ and be non-empty");
    return false;
  }
  out = NodeId(word);
  return true;
}

bool read_quoted(Cursor& c, ParserState& st, const char* what,
                 std::string& out) {
  c.skip_ws();
  int col = c.column();
  if (c.peek() != '"') {
    st.error(c.line_no, col, "syntax_error",
             std::string("expected quoted ") + what);
    return false;
  }
  ++c.pos;
  out.clear();
  while (c.pos < c.line.size()) {
    char ch = c.line[c.pos];
    if (ch == '\\') {
      if (c.pos + 1 >= c.line.size()) break;
      char n = c.line[c.pos + 1];
      if (n == 'n') out += '\n';
      else if (n == 't') out += '\t';
      else out += n;  // covers \" and \\ and anything else literally
      c.pos += 2;
      continue;
    }
    if (ch == '"') {
      ++c.pos;
      return true;
    }
    out += ch;
    ++c.pos;
  }
  st.error(c.line_no, col, "syntax_error",
           std::string("unterminated quoted ") + what);
  return false;
}

void expect_line_end(Cursor& c, ParserState& st) {
  c.skip_ws();
  if (c.pos < c.line.size()) {
    st.error(c.line_no, c.column(), "syntax_error",
             "unexpected trailing input '" + c.line.substr(c.pos) + "'");
  }
}

void parse_goal(Cursor& c, ParserState& st) {
  if (st.have_goal) {
    st.error(c.line_no, c.column(), "duplicate_goal",
             "goal declared more than once");
    return;
  }
  NodeId id;
  std::string label;
  if (!read_id(c, st, "goal id", id)) return;
  if (!read_quoted(c, st, "goal label", label)) return;
  expect_line_end(c, st);
  st.have_goal = true;
  st.def.goal_id = id;
  st.def.goal_label = label;
  st.node_lines.emplace(id, c.line_no);
}

void parse_node(Cursor& c, ParserState& st) {
  StepNode node;
  if (!read_id(c, st, "node id", node.id)) return;
  if (!read_quoted(c, st, "node label", node.label)) return;

  bool have_weight = false, have_role = false, have_tags = false,
       have_status = false;
  while (!c.at_end()) {
    c.skip_ws();
    int key_col = c.column();
    std::string key;
    if (!read_word(c, st, "attribute", key)) return;
    if (c.peek() != '=') {
      st.error(c.line_no, c.column(), "syntax_error",
               "expected '=' after '" + key + "'");
      return;
    }
    ++c.pos;
    int value_col = c.column();

    if (key == "weight") {
      if (have_weight) {
        st.error(c.line_no, key_col, "duplicate_attribute",
                 "weight given twice");
        return;
      }
      have_weight = true;
      bool negative = c.peek() == '-';
      if (negative) ++c.pos;
      std::size_t start = c.pos;
      while (c.pos < c.line.size() && std::isdigit(
                 static_cast<unsigned char>(c.line[c.pos]))) ++c.pos;
      if (c.pos == start) {
        st.error(c.line_no, value_col, "syntax_error", "expected an integer weight");
        return;
      }
      std::string digits = c.line.substr(start, c.pos - start);
      if (negative) {
        st.error(c.line_no, value_col, "negative_weight",
                 "weight must be non-negative, got -" + digits);
        return;
      }
      if (digits.size() > 7 || std::stoll(digits) > kMaxWeight) {
        st.error(c.line_no, value_col, "weight_too_large",
                 "weight exceeds the supported maximum of " +
                     std::to_string(kMaxWeight));
        return;
      }
      node.weight = static_cast<int>(std::stoll(digits));
    } else if (key == "role") {
      if (have_role) {
        st.error(c.line_no, key_col, "duplicate_attribute", "role given twice");
        return;
      }
      have_role = true;
      std::string value;
      if (!read_word(c, st, "role value", value)) return;
      auto role = role_from_name(value);
      if (!role) {
        st.error(c.line_no, value_col, "syntax_error",
                 "role must be one of mandatory|soft|terminal|junction, got '" +
                     value + "'");
        return;
      }
      node.role = role;
    } else if (key == "tags") {
      if (have_tags) {
        st.error(c.line_no, key_col, "duplicate_attribute", "tags given twice");
        return;
      }
      have_tags = true;
      // Comma-separated identifiers; an empty list is allowed.
      while (c.pos < c.line.size() && c.line[c.pos] != ' ' &&
             c.line[c.pos] != '\t') {
        std::size_t start = c.pos;
        while (c.pos < c.line.size() && is_word_char(c.line[c.pos])) ++c.pos;
        std::string tag = c.line.substr(start, c.pos - start);
        if (tag.empty()) {
          st.error(c.line_no, c.column(), "syntax_error", "empty tag");
          return;
        }
        node.tags.push_back(tag);
        if (c.peek() != ',') break;
        ++c.pos;
        if (c.pos >= c.line.size() || c.line[c.pos] == ' ' ||
            c.line[c.pos] == '\t') {
          st.error(c.line_no, c.column(), "syntax_error",
                   "trailing comma in tags");
          return;
        }
      }
    } else if (key == "status") {
      if (have_status) {
        st.error(c.line_no, key_col, "duplicate_attribute",
                 "status given twice");
        return;
      }
      have_status = true;
      std::string value;
      if (!read_word(c, st, "status value", value)) return;
      if (value != "blocked") {
        st.error(c.line_no, value_col, "syntax_error",
                 "status only supports 'blocked', got '" + value + "'");
        return;
      }
      node.forced_fail = true;
    } else {
      st.error(c.line_no, key_col, "unknown_attribute",
               "unknown node attribute '" + key + "'");
      return;
    }
  }
  if (!have_weight) {
    st.error(c.line_no, c.column(), "missing_attribute",
             "node '" + node.id.token + "' is missing weight=");
    return;
  }
  st.node_lines.emplace(node.id, c.line_no);
  st.def.steps.push_back(std::move(node));
}

void parse_edge(Cursor& c, ParserState& st) {
  NodeId from, to;
  if (!read_id(c, st, "edge source", from)) return;
  c.skip_ws();
  if (c.line.compare(c.pos, 2, "->") != 0) {
    st.error(c.line_no, c.column(), "syntax_error", "expected '->'");
    return;
  }
  c.pos += 2;
  if (!read_id(c, st, "edge target", to)) return;
  expect_line_end(c, st);
  st.def.edges.push_back(Edge{from, to});
}

void parse_gate(Cursor& c, ParserState& st) {
  NodeId id;
  if (!read_id(c, st, "gate node", id)) return;
  c.skip_ws();
  int col = c.column();
  std::string value;
  if (!read_word(c, st, "gate kind", value)) return;
  auto gate = gate_from_name(value);
  if (!gate) {
    st.error(c.line_no, col, "syntax_error",
             "gate kind must be 'and' or 'or', got '" + value + "'");
    return;
  }
  expect_line_end(c, st);
  st.def.gates.emplace_back(id, *gate);
}

void parse_scope(Cursor& c, ParserState& st) {
  c.skip_ws();
  int name_col = c.column();
  std::string name;
  if (!read_word(c, st, "scope name", name)) return;
  if (!NodeId::valid_token(name)) {
    st.error(c.line_no, name_col, "invalid_identifier",
             "scope name '" + name + "' must match [a-z0-9_]+");
    return;
  }
  c.skip_ws();
  if (c.peek() != '=') {
    st.error(c.line_no, c.column(), "syntax_error",
             "expected '=' after the scope name");
    return;
  }
  ++c.pos;
  std::vector<NodeId> members;
  while (true) {
    NodeId id;
    if (!read_id(c, st, "scope member", id)) return;
    members.push_back(id);
    c.skip_ws();
    if (c.peek() == ',') {
      ++c.pos;
      continue;
    }
    break;
  }
  expect_line_end(c, st);
  st.scope_lines.emplace(name, c.line_no);
  st.def.scopes.emplace_back(name, std::move(members));
}

int violation_line(const ParserState& st, const Violation& v) {
  for (const NodeId& id : v.nodes) {
    auto it = st.node_lines.find(id);
    if (it != st.node_lines.end()) return it->second;
  }
  return 0;
}

}  // namespace

bool ParseResult::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) {
                       return d.severity == Severity::error;
                     });
}

ParseResult parse_agf(std::string_view text) {
  ParserState st;

  std::istringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = raw;
    Cursor c{line, line_no};
    c.skip_ws();
    if (c.at_end()) continue;

    if (c.peek() == '#') {
      // Comment, except the `#agf N` version marker.
      if (line.compare(c.pos, 4, "#agf") == 0) {
        std::istringstream header(line.substr(c.pos + 4));
        int version = 0;
        if (header >> version && version != kFormatVersion) {
          st.error(line_no, c.column(), "unsupported_version",
                   "unsupported format version " + std::to_string(version) +
                       "; this reader understands agf " +
                       std::to_string(kFormatVersion));
        }
      }
      continue;
    }

    std::string keyword;
    int keyword_col = c.column();
    if (!read_word(c, st, "a statement (goal|node|edge|gate|scope)", keyword))
      continue;
    if (keyword == "goal") parse_goal(c, st);
    else if (keyword == "node") parse_node(c, st);
    else if (keyword == "edge") parse_edge(c, st);
    else if (keyword == "gate") parse_gate(c, st);
    else if (keyword == "scope") parse_scope(c, st);
    else {
      st.error(line_no, keyword_col, "syntax_error",
               "unknown statement '" + keyword +
                   "'; expected goal, node, edge, gate or scope");
    }
  }

  if (!st.have_goal) {
    st.error(0, 0, "no_goal", "document declares no goal");
  }

  ParseResult result;
  result.diagnostics = std::move(st.diagnostics);
  if (st.failed || !st.have_goal) return result;

  std::vector<Violation> violations = validate(st.def);
  if (!violations.empty()) {
    for (const Violation& v : violations) {
      result.diagnostics.push_back(Diagnostic{
          Severity::error, violation_line(st, v), 0,
          violation_code_name(v.code), v.message});
    }
    return result;
  }

  if (st.def.steps.empty()) {
    result.diagnostics.push_back(Diagnostic{
        Severity::warning, 0, 0, "no_steps",
        "graph has a goal but no steps; every scenario table is empty"});
  }
  result.graph = AttackGraph::build(std::move(st.def));
  return result;
}

ParseResult parse_agf_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    ParseResult result;
    result.diagnostics.push_back(Diagnostic{
        Severity::error, 0, 0, "io_error", "cannot open file '" + path + "'"});
    return result;
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_agf(buffer.str());
}

namespace {

std::string quote_label(const std::string& label) {
  std::string out = "\"";
  for (char c : label) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string emit_agf(const AttackGraph& graph) {
  const GraphDefinition& def = graph.definition();
  std::string out = "#agf 1\n";
  out += "goal " + def.goal_id.token + " " + quote_label(def.goal_label) + "\n";

  for (const StepNode& s : def.steps) {  // already sorted by id
    out += "node " + s.id.token + " " + quote_label(s.label) +
           " weight=" + std::to_string(s.weight);
    if (s.role) out += std::string(" role=") + role_name(*s.role);
    if (!s.tags.empty()) {
      out += " tags=";
      for (std::size_t i = 0; i < s.tags.size(); ++i) {
        if (i) out += ",";
        out += s.tags[i];
      }
    }
    if (s.forced_fail) out += " status=blocked";
    out += "\n";
  }
  for (const Edge& e : def.edges) {  // already sorted
    out += "edge " + e.from.token + " -> " + e.to.token + "\n";
  }
  for (const auto& [id, gate] : graph.declared_gates()) {
    out += "gate " + id.token + " " + gate_name(gate) + "\n";
  }
  for (const auto& [name, members] : graph.scopes()) {
    out += "scope " + name + " = ";
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) out += ",";
      out += members[i].token;
    }
    out += "\n";
  }
  return out;
}

}  // namespace agraph
