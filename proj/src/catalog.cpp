#include "agraph/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "agraph/bundled_catalog.hpp"
#include "agraph/errors.hpp"

namespace agraph {

const char* surface_name(Surface surface) {
  return surface == Surface::bluetooth ? "bluetooth" : "android";
}

std::optional<Surface> surface_from_name(const std::string& name) {
  if (name == "bluetooth") return Surface::bluetooth;
  if (name == "android") return Surface::android;
  return std::nullopt;
}

namespace {

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

/// Splits a line into its keyword and the remainder.
std::pair<std::string, std::string> split_keyword(const std::string& line) {
  std::size_t space = line.find_first_of(" \t");
  if (space == std::string::npos) return {line, ""};
  return {line.substr(0, space), strip(line.substr(space + 1))};
}

bool parse_quoted(const std::string& text, std::string& out) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"')
    return false;
  out.clear();
  for (std::size_t i = 1; i + 1 < text.size(); ++i) {
    char c = text[i];
    if (c == '\\' && i + 2 < text.size()) {
      char n = text[++i];
      if (n == 'n') out += '\n';
      else if (n == 't') out += '\t';
      else out += n;
    } else if (c == '"') {
      return false;  // unescaped quote before the end
    } else {
      out += c;
    }
  }
  return true;
}

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
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

CatalogLoad load_catalog_text(std::string_view text, std::string source_name) {
  CatalogLoad out;
  out.catalog.source = std::move(source_name);

  std::vector<std::string> errors;
  auto fail = [&errors](int line, const std::string& message) {
    errors.push_back("line " + std::to_string(line) + ": " + message);
  };

  std::optional<MitigationRecord> current;
  bool have_surface = false;
  int record_line = 0;

  std::istringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = strip(raw);
    if (line.empty() || line[0] == '#') continue;
    auto [keyword, rest] = split_keyword(line);

    if (keyword == "record") {
      if (current) fail(line_no, "record opened before the previous one ended");
      current = MitigationRecord{};
      have_surface = false;
      record_line = line_no;
      continue;
    }
    if (!current) {
      fail(line_no, "'" + keyword + "' outside a record block");
      continue;
    }
    if (keyword == "end") {
      if (current->attack_name.empty())
        fail(record_line, "record is missing a name");
      if (!have_surface)
        fail(record_line, "record is missing a surface");
      std::sort(current->tags.begin(), current->tags.end());
      current->tags.erase(
          std::unique(current->tags.begin(), current->tags.end()),
          current->tags.end());
      out.catalog.records.push_back(std::move(*current));
      current.reset();
    } else if (keyword == "name") {
      std::string value;
      if (!parse_quoted(rest, value)) fail(line_no, "name expects a quoted string");
      else if (!current->attack_name.empty()) fail(line_no, "name declared twice");
      else current->attack_name = value;
    } else if (keyword == "surface") {
      auto surface = surface_from_name(rest);
      if (!surface) fail(line_no, "surface must be 'bluetooth' or 'android'");
      else if (have_surface) fail(line_no, "surface declared twice");
      else {
        current->surface = *surface;
        have_surface = true;
      }
    } else if (keyword == "author") {
      std::string value;
      if (!parse_quoted(rest, value)) fail(line_no, "author expects a quoted string");
      else current->authors.push_back(value);
    } else if (keyword == "mitigation") {
      std::string value;
      if (!parse_quoted(rest, value)) fail(line_no, "mitigation expects a quoted string");
      else current->mitigations.push_back(value);
    } else if (keyword == "tags") {
      std::string tag;
      std::istringstream tag_stream(rest);
      while (std::getline(tag_stream, tag, ',')) {
        tag = strip(tag);
        if (tag.empty()) {
          fail(line_no, "empty tag");
          continue;
        }
        current->tags.push_back(tag);
      }
    } else {
      fail(line_no, "unknown keyword '" + keyword + "'");
    }
  }
  if (current) fail(record_line, "record not closed with 'end'");

  if (!errors.empty()) {
    std::string message = "malformed catalog (" + out.catalog.source + ")";
    for (const std::string& e : errors) message += "\n  " + e;
    raise(Errc::malformed_catalog, message);
  }
  if (out.catalog.records.empty()) {
    out.warnings.push_back("catalog '" + out.catalog.source +
                           "' contains no records");
  }
  return out;
}

CatalogLoad load_catalog(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) raise(Errc::io_error, "cannot open catalog file '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return load_catalog_text(buffer.str(), path);
}

const Catalog& bundled_catalog() {
  static const Catalog catalog =
      load_catalog_text(kBundledCatalogText, "bundled").catalog;
  return catalog;
}

std::string serialize_catalog(const Catalog& catalog) {
  std::string out = "#agc 1\n";
  for (const MitigationRecord& r : catalog.records) {
    out += "\nrecord\n";
    out += "  name " + quote(r.attack_name) + "\n";
    out += "  surface " + std::string(surface_name(r.surface)) + "\n";
    for (const std::string& a : r.authors) out += "  author " + quote(a) + "\n";
    for (const std::string& m : r.mitigations)
      out += "  mitigation " + quote(m) + "\n";
    if (!r.tags.empty()) {
      out += "  tags ";
      for (std::size_t i = 0; i < r.tags.size(); ++i) {
        if (i) out += ",";
        out += r.tags[i];
      }
      out += "\n";
    }
    out += "end\n";
  }
  return out;
}

std::vector<MitigationRecord> lookup(const Catalog& catalog,
                                     const CatalogQuery& query) {
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
  };

  std::vector<MitigationRecord> out;
  for (const MitigationRecord& r : catalog.records) {
    if (query.surface && r.surface != *query.surface) continue;
    if (query.tag &&
        !std::binary_search(r.tags.begin(), r.tags.end(), *query.tag))
      continue;
    if (query.name_substring &&
        lower(r.attack_name).find(lower(*query.name_substring)) ==
            std::string::npos)
      continue;
    out.push_back(r);
  }
  return out;
}

}  // namespace agraph
