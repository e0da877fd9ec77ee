#include <sstream>

#include "doctest.h"
#include "qha/report.hpp"

using namespace qha;

TEST_CASE("empty report is valid JSON") {
  NormReport r;
  const auto j = to_json(r);
  CHECK(j["entries"].is_array());
  CHECK(j["entries"].empty());
  CHECK(report_from_json(nlohmann::json::parse(j.dump())).entries.empty());
}

TEST_CASE("round trip and derived verdicts") {
  NormReport r;
  r.metadata["seed"] = 7;
  r.add("a", "plumbing", 1e-13, 1e-12);
  r.add("b", "ratio window", 4.1, 5.0, 3.0).extra["halved"] = 0.25;
  r.add("c", "bound", 2.0, 1.0);
  r.skip("d", "inverse", "singular");
  CHECK(r.entries[0].pass());
  CHECK(r.entries[1].pass());
  CHECK_FALSE(r.entries[2].pass());
  CHECK(r.entries[3].pass());
  CHECK_FALSE(r.all_pass());
  const NormReport back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
  REQUIRE(back.entries.size() == r.entries.size());
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    CHECK(back.entries[i].name == r.entries[i].name);
    CHECK(back.entries[i].anchor == r.entries[i].anchor);
    CHECK(back.entries[i].pass() == r.entries[i].pass());
    if (!r.entries[i].skipped) CHECK(back.entries[i].value == r.entries[i].value);
    CHECK(back.entries[i].extra == r.entries[i].extra);
  }
  CHECK(back.metadata == r.metadata);

  auto j = to_json(r);
  j["entries"][2]["pass"] = true;
  CHECK_THROWS_AS(report_from_json(j), std::exception);
}

TEST_CASE("CSV has one row per entry plus header") {
  NormReport r;
  r.add("x,y", "quoted \"anchor\"", 1.0, 2.0);
  r.add("z", "plumbing", 0.5, 1.0);
  const std::string csv = to_csv(r);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == r.entries.size() + 1);
}
