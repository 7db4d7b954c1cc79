#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "wdds/params.hpp"

using namespace wdds;
using nlohmann::json;

namespace {

const std::filesystem::path kSource = WDDS_SOURCE_DIR;

ParameterSet from_override(const json& body) {
  json doc = body;
  doc["extends"] = "default";
  return params_from_json(doc);
}

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("defaults carry the published constants") {
  const auto p = default_params();
  CHECK(p.general.fcr == 0.108);
  CHECK(p.pto.l2 == 4.7);
  CHECK(p.pto.l3 == 0.0);
  CHECK(p.general.hs == 2.64);
  CHECK(p.general.tp == 9.86);
  CHECK(p.econ.inflation == 1.26);
}

TEST_CASE("omega grid spans 0.2 to 3.0 rad/s in 0.14 steps") {
  const auto w = default_params().omega_grid();
  REQUIRE(w.size() == 21);
  CHECK(w.front() == doctest::Approx(0.2));
  CHECK(w.back() == doctest::Approx(3.0));
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] - w[i - 1] == doctest::Approx(0.14));
}

TEST_CASE("negative depth is rejected") {
  const json doc = {{"general", {{"depth", {{"value", -1}, {"unit", "m"}}}}}};
  CHECK_THROWS_AS((void)from_override(doc), ConfigError);
}

TEST_CASE("overrides accept display units and convert to SI") {
  const auto p = from_override({{"general", {{"fcr", {{"value", 12}, {"unit", "%/yr"}}}}}});
  CHECK(p.general.fcr == doctest::Approx(0.12));
  const auto q = from_override({{"general", {{"depth", {{"value", 15}, {"unit", "m"}}}}}});
  CHECK(q.general.depth == 15.0);
}

TEST_CASE("unknown keys, bad units and missing sections are config errors") {
  CHECK_THROWS_AS((void)from_override({{"general", {{"depht", 12}}}}), ConfigError);
  CHECK_THROWS_AS((void)from_override({{"general", {{"depth", {{"value", 12}, {"unit", "kg"}}}}}}),
                  ConfigError);
  CHECK_THROWS_AS((void)from_override({{"bogus", json::object()}}), ConfigError);
  CHECK_THROWS_AS((void)params_from_json({{"general", json::object()}}), ConfigError);
  CHECK_THROWS_AS((void)params_from_json(json::array()), ConfigError);
}

TEST_CASE("enumerated options parse and reject unknown names") {
  CHECK(parse_intake("band") == IntakeScreen::band);
  CHECK(parse_stabilization("calcite") == Stabilization::calcite);
  CHECK(to_string(IntakeScreen::microscreen) == "microscreen");
  CHECK_THROWS_AS((void)parse_intake("mesh"), ConfigError);
}

TEST_CASE("save then load is the identity") {
  auto p = default_params();
  p.general.depth = 13.25;
  p.pto.l3 = 0.4;
  p.econ.intake = IntakeScreen::band;
  const auto path = std::filesystem::temp_directory_path() / "wdds_params_roundtrip.json";
  save_params(p, path);
  const auto q = load_params(path);
  CHECK(q == p);
  CHECK(params_checksum(q) == params_checksum(p));
  std::filesystem::remove(path);
  CHECK(params_from_json(params_to_json(p)) == p);
}

TEST_CASE("checksum of the default set is pinned") {
  CHECK(params_checksum(default_params()) == 0x9f68d497e95d17ebULL);
  auto p = default_params();
  p.general.fcr = 0.109;
  CHECK(params_checksum(p) != params_checksum(default_params()));
}

TEST_CASE("bundled parameter file matches the compiled defaults") {
  const auto p = load_params(kSource / "data/params_default.json");
  const auto d = default_params();
  const auto a = params_to_json(p);
  const auto b = params_to_json(d);
  for (const auto& [section, body] : b.items()) {
    if (!body.is_object()) continue;
    for (const auto& [key, entry] : body.items()) {
      if (!entry.is_object() || !entry.contains("value") || !entry["value"].is_number()) continue;
      INFO(section << "." << key);
      CHECK(close(a[section][key]["value"].get<double>(), entry["value"].get<double>(), 1e-12));
    }
  }
  CHECK(p.econ == d.econ);
}

TEST_CASE("missing parameter file is a config error") {
  CHECK_THROWS_AS((void)load_params(kSource / "data/does_not_exist.json"), ConfigError);
}
