#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agraph {

enum class Surface { bluetooth, android };

const char* surface_name(Surface surface);
std::optional<Surface> surface_from_name(const std::string& name);

/// One catalog row: a named attack on a surface, who reported it, and the
/// recommended mitigations. Tags are editorial and link records to graph
/// nodes carrying the same tags.
struct MitigationRecord {
  std::string attack_name;
  Surface surface = Surface::bluetooth;
  std::vector<std::string> authors;
  std::vector<std::string> mitigations;
  std::vector<std::string> tags;  // sorted, unique

  friend bool operator==(const MitigationRecord&,
                         const MitigationRecord&) = default;
};

struct Catalog {
  std::vector<MitigationRecord> records;  // file order
  std::string source;                     // provenance: path or "bundled"

  friend bool operator==(const Catalog& a, const Catalog& b) {
    return a.records == b.records;
  }
};

struct CatalogLoad {
  Catalog catalog;
  std::vector<std::string> warnings;
};

/// Parses the `.agc` record format. Throws Error(malformed_catalog) with
/// per-line diagnostics in the message.
CatalogLoad load_catalog_text(std::string_view text, std::string source_name);
CatalogLoad load_catalog(const std::string& path);

/// The catalog compiled into the library (a copy of data/catalog.agc):
/// 12 bluetooth and 6 android records. Loading it cannot fail.
const Catalog& bundled_catalog();

/// Canonical `.agc` text; load(serialize(c)) equals c.
std::string serialize_catalog(const Catalog& catalog);

struct CatalogQuery {
  std::optional<Surface> surface;
  std::optional<std::string> tag;
  /// Case-insensitive substring match on the attack name.
  std::optional<std::string> name_substring;
};

/// Conjunctive filter over the records, in file order.
std::vector<MitigationRecord> lookup(const Catalog& catalog,
                                     const CatalogQuery& query);

}  // namespace agraph
