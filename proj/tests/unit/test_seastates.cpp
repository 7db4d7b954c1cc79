#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "wdds/seastates.hpp"

using namespace wdds;

namespace {

const std::filesystem::path kSource = WDDS_SOURCE_DIR;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kHeader =
    "#YY  MM DD hh mm WDIR WSPD GST  WVHT   DPD   APD MWD   PRES  ATMP  WTMP  DEWP  VIS  TIDE\n"
    "#yr  mo dy hr mn degT m/s  m/s     m   sec   sec degT   hPa  degC  degC  degC  nmi    ft\n";

std::string row(const char* wvht, const char* dpd) {
  return std::string("2015 03 04 05 50 999 99.0 99.0 ") + wvht + " " + dpd +
         "  7.31 999 9999.0 999.0  26.6 999.0 99.0 99.00\n";
}

std::map<std::string, std::vector<Observation>> level1_fixture() {
  const auto doc = nlohmann::json::parse(read_file(kSource / "tests/fixtures/appendix_b_level1.json"));
  std::map<std::string, std::vector<Observation>> out;
  for (const auto& [station, pts] : doc.at("stations").items()) {
    for (const auto& p : pts) {
      out[station].push_back({"", p.at("Hs").get<double>(), p.at("Tp").get<double>(), station});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("buoy text parsing") {
  SUBCASE("one good row") {
    const auto r = parse_ndbc(std::string(kHeader) + row("2.10", "9.00"), "52200");
    REQUIRE(r.observations.size() == 1);
    CHECK(r.observations[0].Hs == 2.1);
    CHECK(r.observations[0].Tp == 9.0);
    CHECK(r.observations[0].timestamp == "2015-03-04T05:50");
    CHECK(r.observations[0].station == "52200");
    CHECK(r.ledger.kept == 1);
  }

  SUBCASE("sentinels are dropped and counted") {
    const auto r = parse_ndbc(std::string(kHeader) + row("99.00", "9.00") + row("1.5", "99.00") +
                              row("1.2", "8.1"));
    CHECK(r.observations.size() == 1);
    CHECK(r.ledger.sentinel == 2);
    CHECK(r.ledger.data_rows == 3);
  }

  SUBCASE("missing and nonpositive values are counted separately") {
    const auto r = parse_ndbc(std::string(kHeader) + row("MM", "9.0") + row("0.00", "8.0") +
                              "2015 03 04\n");
    CHECK(r.observations.empty());
    CHECK(r.ledger.missing == 2);
    CHECK(r.ledger.nonpositive == 1);
  }

  SUBCASE("empty file is not an error") {
    const auto r = parse_ndbc("");
    CHECK(r.observations.empty());
    CHECK(r.ledger.data_rows == 0);
  }

  SUBCASE("two-digit years and an unmarked header") {
    const auto r = parse_ndbc(
        "YY MM DD hh WD   WSPD GST  WVHT  DPD   APD  MWD  BAR    ATMP  WTMP  DEWP  VIS\n"
        "98 01 01 00 280  4.3  5.4  1.40  8.33  5.90 999 1015.3  21.7  22.4 999.0 99.0\n");
    REQUIRE(r.observations.size() == 1);
    CHECK(r.observations[0].timestamp == "1998-01-01T00:00");
    CHECK(r.observations[0].Tp == 8.33);
  }

  SUBCASE("a file without the wave columns is rejected") {
    CHECK_THROWS_AS((void)parse_ndbc("hello world\n1 2 3\n"), NdbcFormatError);
    CHECK_THROWS_AS((void)parse_ndbc("#YY MM DD hh mm WSPD\n2015 01 01 00 00 3.0\n"),
                    NdbcFormatError);
  }

  SUBCASE("bundled station files") {
    for (const auto& e : std::filesystem::directory_iterator(kSource / "tests/fixtures/ndbc")) {
      const auto r = parse_ndbc(read_file(e.path()), e.path().stem().string().substr(0, 5));
      INFO(e.path().filename().string());
      CHECK(r.ledger.data_rows == 600);
      CHECK(r.ledger.sentinel == 30);
      CHECK(r.observations.size() == 570);
    }
  }
}

TEST_CASE("k-means") {
  SUBCASE("k equal to n returns the points") {
    const std::vector<SeaPoint> pts = {{9.0, 1.2}, {12.5, 2.2}, {6.0, 0.8}, {14.0, 3.1}};
    const auto c = kmeans(pts, 4, 1);
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    CHECK(c.centers == sorted);
    CHECK(c.inertia == 0.0);
    for (auto w : c.weights) CHECK(w == 1);
  }

  SUBCASE("two separated blobs") {
    std::mt19937_64 rng(123);
    const double sigma = 0.3;
    const std::size_t n = 400;
    std::normal_distribution<> noise(0.0, sigma);
    std::vector<SeaPoint> pts;
    double m[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < n; ++i) {
      const SeaPoint a{6.0 + noise(rng), 1.0 + noise(rng)};
      const SeaPoint b{13.0 + noise(rng), 3.0 + noise(rng)};
      pts.push_back(a);
      pts.push_back(b);
      m[0][0] += a.Tp / n;
      m[0][1] += a.Hs / n;
      m[1][0] += b.Tp / n;
      m[1][1] += b.Hs / n;
    }
    const auto c = kmeans(pts, 2, 7);
    REQUIRE(c.centers.size() == 2);
    const double tol = 3.0 * sigma / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(c.centers[0].Tp - 6.0) < tol);
    CHECK(std::abs(c.centers[0].Hs - 1.0) < tol);
    CHECK(std::abs(c.centers[1].Tp - 13.0) < tol);
    CHECK(std::abs(c.centers[1].Hs - 3.0) < tol);
    // Perfect separation: the centers are exactly the sample means.
    CHECK(c.centers[0].Tp == doctest::Approx(m[0][0]));
    CHECK(c.centers[1].Hs == doctest::Approx(m[1][1]));
    CHECK(c.weights[0] == n);
    CHECK(c.monotone);
  }

  SUBCASE("inertia never rises") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<> tp(4.0, 20.0), hs(0.3, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<SeaPoint> pts(300);
      for (auto& p : pts) p = {tp(rng), hs(rng)};
      const auto c = kmeans(pts, 8, static_cast<std::uint64_t>(trial));
      CHECK(c.monotone);
      for (std::size_t i = 1; i < c.inertia_history.size(); ++i) {
        CHECK(c.inertia_history[i] <= c.inertia_history[i - 1] * (1.0 + 1e-12));
      }
    }
  }

  SUBCASE("input order does not matter") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<> tp(4.0, 20.0), hs(0.3, 5.0);
    std::vector<SeaPoint> pts(120);
    for (auto& p : pts) p = {tp(rng), hs(rng)};
    const auto a = kmeans(pts, 6, 3);
    std::shuffle(pts.begin(), pts.end(), rng);
    const auto b = kmeans(pts, 6, 3);
    CHECK(a.centers == b.centers);
    CHECK(a.inertia == b.inertia);
  }

  SUBCASE("duplicates that cannot fill k seeds are flagged") {
    const std::vector<SeaPoint> pts(5, SeaPoint{9.0, 2.0});
    const auto c = kmeans(pts, 3, 1);
    CHECK(c.collapsed);
  }

  SUBCASE("too few points") {
    const std::vector<SeaPoint> pts = {{9.0, 2.0}};
    CHECK_THROWS_AS((void)kmeans(pts, 2, 1), std::invalid_argument);
  }
}

TEST_CASE("two-level clustering") {
  SUBCASE("one station with k1 = k2 is the identity at level two") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<> tp(4.0, 20.0), hs(0.3, 5.0);
    std::map<std::string, std::vector<Observation>> one;
    for (int i = 0; i < 200; ++i) one["46221"].push_back({"", hs(rng), tp(rng), "46221"});
    const auto r = two_level_cluster(one, 6, 6, 1);
    CHECK(r.level2.centers == r.level1.at("46221").centers);
    for (auto l : r.locations) CHECK(l == 1);
  }

  SUBCASE("published level-one centers regroup into the published states") {
    const auto r = two_level_cluster(level1_fixture(), 10, 20, 1);
    REQUIRE(r.level2.centers.size() == 20);
    std::size_t best = 0;
    double dist = 1e9;
    for (std::size_t i = 0; i < r.level2.centers.size(); ++i) {
      const auto& c = r.level2.centers[i];
      const double d = std::hypot(c.Tp - 9.84231198249586, c.Hs - 1.681761551332142);
      if (d < dist) {
        dist = d;
        best = i;
      }
    }
    CHECK(dist < 0.03);
    CHECK(r.locations[best] == 1);
    std::size_t members = 0;
    for (auto w : r.level2.weights) members += w;
    CHECK(members == 50);
  }

  SUBCASE("station order does not change the result") {
    auto data = level1_fixture();
    const auto a = two_level_cluster(data, 10, 20, 4);
    std::map<std::string, std::vector<Observation>> reversed;
    for (auto& [k, v] : data) {
      auto w = v;
      std::reverse(w.begin(), w.end());
      reversed[k] = w;
    }
    const auto b = two_level_cluster(reversed, 10, 20, 4);
    CHECK(a.level2.inertia == b.level2.inertia);
    CHECK(a.level2.centers == b.level2.centers);
  }

  SUBCASE("centers stay inside the data hull") {
    const auto data = level1_fixture();
    double lo_tp = 1e9, hi_tp = 0, lo_hs = 1e9, hi_hs = 0;
    for (const auto& [_, v] : data) {
      for (const auto& o : v) {
        lo_tp = std::min(lo_tp, o.Tp);
        hi_tp = std::max(hi_tp, o.Tp);
        lo_hs = std::min(lo_hs, o.Hs);
        hi_hs = std::max(hi_hs, o.Hs);
      }
    }
    const auto r = two_level_cluster(data, 10, 20, 1);
    for (const auto& c : r.level2.centers) {
      CHECK(c.Tp >= lo_tp);
      CHECK(c.Tp <= hi_tp);
      CHECK(c.Hs >= lo_hs);
      CHECK(c.Hs <= hi_hs);
    }
  }

  SUBCASE("bundled buoy files give twenty sea states") {
    std::map<std::string, std::vector<Observation>> per;
    for (const auto& e : std::filesystem::directory_iterator(kSource / "tests/fixtures/ndbc")) {
      const auto id = e.path().stem().string().substr(0, 5);
      per[id] = parse_ndbc(read_file(e.path()), id).observations;
    }
    const auto r = two_level_cluster(per, 10, 20, 1, 2);
    const auto doc = seastates_to_json(r, 10, 20, 1);
    CHECK(doc.at("schema") == "wdds-seastates/1");
    REQUIRE(doc.at("sea_states").size() == 20);
    for (const auto& s : doc.at("sea_states")) {
      CHECK(s.contains("Tp"));
      CHECK(s.contains("Hs"));
      CHECK(s.at("locations").get<int>() >= 1);
      CHECK(s.at("locations").get<int>() <= 5);
    }
    const auto seas = seastates_from_json(doc);
    CHECK(seas.size() == 20);
    // Same seed, different thread count.
    const auto again = two_level_cluster(per, 10, 20, 1, 1);
    CHECK(seastates_to_json(again, 10, 20, 1).dump() == doc.dump());
  }
}

TEST_CASE("bundled sea-state set loads") {
  const auto seas = load_seastates(kSource / "data/seastates/appendix_b.json");
  REQUIRE(seas.size() == 20);
  bool found = false;
  for (const auto& s : seas) found = found || (std::abs(s.Tp - 9.842) < 1e-3 && std::abs(s.Hs - 1.682) < 1e-3);
  CHECK(found);
}
