#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kSource = WDDS_SOURCE_DIR;
const fs::path kScratch = WDDS_SCRATCH_DIR;

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + WDDS_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh(const std::string& name) {
  const auto dir = kScratch / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("evaluate writes a report with an LCOW field") {
  const auto dir = fresh("evaluate");
  REQUIRE(run("evaluate --params default --design nominal --out " + (dir / "r.json").string()) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "r.json"));
  CHECK(j.at("schema") == "wdds-evaluation/1");
  CHECK(j.at("lcow").is_number());
}

TEST_CASE("missing or malformed parameters exit with code 2") {
  const auto dir = fresh("bad_params");
  CHECK(run("evaluate --params " + (dir / "nope.json").string()) == 2);
  std::ofstream(dir / "bad.json") << R"({"extends": "default", "general": {"depth": -1}})";
  CHECK(run("evaluate --params " + (dir / "bad.json").string()) == 2);
  CHECK(run("validate-config " + (dir / "bad.json").string()) == 2);
  CHECK(run("validate-config " + (kSource / "data/params_default.json").string()) == 0);
  CHECK(run("evaluate --spectrum jonswap") == 2);
  CHECK(run("no-such-command") == 2);
}

TEST_CASE("time series dump has fixed columns") {
  const auto dir = fresh("timeseries");
  REQUIRE(run("evaluate --out " + (dir / "r.json").string() + " --dump-timeseries " +
              (dir / "ts.csv").string()) == 0);
  std::ifstream in(dir / "ts.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,theta,theta_dot,s,P_feed,Q_perm,Q_brine,Q_relief");
}

TEST_CASE("mesh info") {
  CHECK(run("mesh-info --design nominal") == 0);
}

TEST_CASE("sensitivity over three toy sea states") {
  const auto dir = fresh("sensitivity");
  const auto seas = dir / "seas.json";
  std::ofstream(seas) << R"({"schema": "wdds-seastates/1", "sea_states": [
    {"Tp": 9.191, "Hs": 2.535}, {"Tp": 7.9, "Hs": 1.918}, {"Tp": 12.833, "Hs": 2.064}]})";
  const std::string common = "sensitivity --seastates " + seas.string() + " --pop 24 --gens 30 --seed 3";
  REQUIRE(run(common + " --jobs 1 --out " + (dir / "a").string()) == 0);
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "seastate_%03d", i);
    CHECK(fs::exists(dir / "a" / name / "report.json"));
  }
  const auto summary = slurp(dir / "a" / "summary.csv");
  CHECK(summary.rfind("index,Tp,Hs,w,t,m,l1,Ap,Vacc,P0,Qpmax,lcow\n", 0) == 0);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);
  REQUIRE(run(common + " --jobs 3 --out " + (dir / "b").string()) == 0);
  CHECK(slurp(dir / "b" / "summary.csv") == summary);
}

TEST_CASE("sea-state clustering from local buoy files") {
  const auto dir = fresh("cluster");
  REQUIRE(run("cluster-seastates --stations 52200,51206,46221,41053,44011 --years 2015 --data-dir " +
              (kSource / "tests/fixtures/ndbc").string() + " --out " + (dir / "s.json").string()) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "s.json"));
  CHECK(j.at("sea_states").size() == 20);
  CHECK(run("cluster-seastates --stations 99999 --years 2015 --data-dir " +
            (kSource / "tests/fixtures/ndbc").string() + " --out " + (dir / "t.json").string()) != 0);
}
