#include <doctest.h>

#include <algorithm>

#include "agraph/catalog.hpp"
#include "agraph/errors.hpp"
#include "testutil.hpp"

using namespace agraph;

namespace {

const MitigationRecord* by_name(const Catalog& catalog, const std::string& name) {
  for (const MitigationRecord& r : catalog.records) {
    if (r.attack_name == name) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("bundled catalog carries 12 bluetooth and 6 android records") {
  const Catalog& catalog = bundled_catalog();
  CHECK(catalog.records.size() == 18);
  auto bt = std::count_if(catalog.records.begin(), catalog.records.end(),
                          [](const MitigationRecord& r) {
                            return r.surface == Surface::bluetooth;
                          });
  CHECK(bt == 12);
  CHECK(catalog.records.size() - bt == 6);
}

TEST_CASE("bundled records keep the source text verbatim") {
  const Catalog& catalog = bundled_catalog();

  const std::vector<std::string> expected_names = {
      "Capture Bluetooth device address",
      "BluePrinting",
      "Reflection attack",
      "Repeatable authentication attempts",
      "Blueover",
      "Static SSP pass keys",
      "Encryption key negotiable.",
      "No authentication",
      "Bluesnarfing",
      "Pin Cracking",
      "MIM/Impersonation Attack",
      "Pairing Eavesdropping",
      "Physical Attack",
      "Permission Model Attack",
      "UI State Inference Attacks",
      "Man In The Middle",
      "General",
      "Denial of Service",
  };
  REQUIRE(catalog.records.size() == expected_names.size());
  for (std::size_t i = 0; i < expected_names.size(); ++i) {
    CHECK(catalog.records[i].attack_name == expected_names[i]);
  }

  const MitigationRecord* blueover = by_name(catalog, "Blueover");
  REQUIRE(blueover != nullptr);
  CHECK(blueover->mitigations ==
        std::vector<std::string>{"Keep device address secret"});
  CHECK(blueover->authors == std::vector<std::string>{"Minar [24]"});

  const MitigationRecord* dos = by_name(catalog, "Denial of Service");
  REQUIRE(dos != nullptr);
  CHECK(dos->mitigations ==
        std::vector<std::string>{"Disable Wi-Fi when not in use"});
  CHECK(dos->surface == Surface::android);

  const MitigationRecord* reflection = by_name(catalog, "Reflection attack");
  REQUIRE(reflection != nullptr);
  CHECK(reflection->mitigations ==
        std::vector<std::string>{"Use encryption", "Keep device address secret"});

  const MitigationRecord* mim = by_name(catalog, "MIM/Impersonation Attack");
  REQUIRE(mim != nullptr);
  CHECK(mim->mitigations.size() == 4);
  CHECK(mim->mitigations[2] == "Security mode 3");

  // A comma the source carries inside one mitigation phrase stays intact.
  const MitigationRecord* ssp = by_name(catalog, "Static SSP pass keys");
  REQUIRE(ssp != nullptr);
  CHECK(ssp->mitigations ==
        std::vector<std::string>{"Random, passkeys at each pairing"});

  const MitigationRecord* capture =
      by_name(catalog, "Capture Bluetooth device address");
  REQUIRE(capture != nullptr);
  CHECK(capture->authors ==
        std::vector<std::string>{"Padgette [41]", "Minar [24]"});
}

TEST_CASE("bundled text equals the repository data file") {
  CatalogLoad from_file =
      load_catalog(agraph::testing::data_file("catalog.agc"));
  CHECK(from_file.warnings.empty());
  CHECK(from_file.catalog == bundled_catalog());
}

TEST_CASE("serialize/load round trip") {
  const Catalog& catalog = bundled_catalog();
  std::string text = serialize_catalog(catalog);
  CatalogLoad again = load_catalog_text(text, "round-trip");
  CHECK(again.catalog == catalog);
  CHECK(serialize_catalog(again.catalog) == text);
}

TEST_CASE("lookup filters conjunctively in file order") {
  const Catalog& catalog = bundled_catalog();

  SUBCASE("surface and name substring") {
    CatalogQuery query;
    query.surface = Surface::bluetooth;
    query.name_substring = "Blueover";
    auto hits = lookup(catalog, query);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].mitigations ==
          std::vector<std::string>{"Keep device address secret"});
  }
  SUBCASE("android denial of service") {
    CatalogQuery query;
    query.surface = Surface::android;
    query.name_substring = "Denial";
    auto hits = lookup(catalog, query);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].mitigations ==
          std::vector<std::string>{"Disable Wi-Fi when not in use"});
  }
  SUBCASE("name matching ignores case") {
    CatalogQuery query;
    query.name_substring = "blueover";
    CHECK(lookup(catalog, query).size() == 1);
  }
  SUBCASE("unknown tag matches nothing") {
    CatalogQuery query;
    query.tag = "nonexistent";
    CHECK(lookup(catalog, query).empty());
  }
  SUBCASE("tag filter") {
    CatalogQuery query;
    query.tag = "device_address";
    auto hits = lookup(catalog, query);
    CHECK(hits.size() == 4);
    for (const MitigationRecord& r : hits) {
      CHECK(std::binary_search(r.tags.begin(), r.tags.end(),
                               std::string("device_address")));
    }
  }
  SUBCASE("empty query returns everything") {
    CHECK(lookup(catalog, CatalogQuery{}).size() == 18);
  }
}

TEST_CASE("catalog parser diagnostics") {
  SUBCASE("empty file loads with a warning") {
    CatalogLoad load = load_catalog_text("", "empty");
    CHECK(load.catalog.records.empty());
    REQUIRE(load.warnings.size() == 1);
  }
  SUBCASE("missing surface") {
    const char* text =
        "record\n  name \"X\"\n  mitigation \"Fix\"\nend\n";
    CHECK_THROWS_AS(load_catalog_text(text, "test"), Error);
    try {
      load_catalog_text(text, "test");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::malformed_catalog);
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }
  SUBCASE("unterminated record") {
    CHECK_THROWS_AS(
        load_catalog_text("record\n  name \"X\"\n  surface android\n", "t"),
        Error);
  }
  SUBCASE("unknown keyword names its line") {
    try {
      load_catalog_text("record\n  named \"X\"\nend\n", "t");
      FAIL("expected malformed_catalog");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("field outside a record") {
    CHECK_THROWS_AS(load_catalog_text("name \"X\"\n", "t"), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_catalog("/nonexistent/catalog.agc"), Error);
  }
}
