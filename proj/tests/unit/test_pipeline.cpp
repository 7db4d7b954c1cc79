#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "wdds/pipeline.hpp"

using namespace wdds;

namespace {

const std::filesystem::path kSource = WDDS_SOURCE_DIR;

const EvalContext& nominal_context() {
  static const EvalContext ctx = make_context(default_params(), {2.64, 9.86}, 1);
  return ctx;
}

}  // namespace

TEST_CASE("nominal design evaluates end to end") {
  const auto e = evaluate(nominal_design(), nominal_context());
  REQUIRE_FALSE(e.failed);
  CHECK(std::isfinite(e.lcow));
  CHECK(e.lcow > 0.0);
  CHECK(e.awp > 0.0);
  CHECK(e.objective == doctest::Approx(e.lcow + e.penalty));
  CHECK(e.cost.capex().value ==
        doctest::Approx(e.cost.capex_wec.value + e.cost.capex_pto.value + e.cost.capex_swro.value));
  CHECK(e.cost.opex_pto.value == 0.0);

  const auto j = evaluation_to_json(e);
  CHECK(j.at("schema") == "wdds-evaluation/1");
  CHECK(j.at("lcow").is_number());
  CHECK(j.at("design").at("Qpmax") == 3150.0);
  CHECK(j.contains("constraints"));
}

TEST_CASE("penalty weighs relative violations") {
  CHECK(penalty_term({}) == 0.0);
  CHECK(penalty_term({{"stroke", 0.1, 12.0}}) == doctest::Approx(kPenaltyWeight * 0.1));
  CHECK(penalty_term({{"stroke", 0.1, 12.0}, {"max_pressure", 0.25, 40.0}}) ==
        doctest::Approx(kPenaltyWeight * 0.35));

  auto p = default_params();
  p.pto.stroke_max = 0.5;
  const auto ctx = make_context(p, {2.64, 9.86}, 1);
  const auto e = evaluate(nominal_design(), ctx);
  REQUIRE_FALSE(e.failed);
  double stroke = -1.0;
  for (const auto& v : e.sim.violations) {
    if (v.name == "stroke") stroke = v.magnitude;
  }
  REQUIRE(stroke > 0.0);
  CHECK(stroke == doctest::Approx((e.sim.max_stroke - 0.5) / 0.5));
  CHECK(e.objective == doctest::Approx(e.lcow + penalty_term(e.sim.violations)));
  CHECK_FALSE(e.feasible());
}

TEST_CASE("non-finite simulations map to the sentinel") {
  const auto ctx = make_context(default_params(),
                                {std::numeric_limits<double>::quiet_NaN(), 9.86}, 1);
  const auto e = evaluate(nominal_design(), ctx);
  CHECK(e.failed);
  CHECK(e.objective == kFailedObjective);
  CHECK_FALSE(e.diagnostic.empty());
  CHECK(penalized_objective(nominal_design(), ctx) == kFailedObjective);
  CHECK(evaluation_to_json(e).at("lcow").is_null());
}

TEST_CASE("imported coefficients") {
  auto ctx = nominal_context();
  use_imported_coefficients(ctx, load_coefficients(kSource / "data/hydro/nominal_reference.json"));

  SUBCASE("matching geometry reproduces the surrogate result") {
    const auto a = evaluate(nominal_design(), nominal_context());
    const auto b = evaluate(nominal_design(), ctx);
    REQUIRE_FALSE(b.failed);
    CHECK(b.lcow == doctest::Approx(a.lcow).epsilon(1e-9));
  }

  SUBCASE("a different geometry is rejected") {
    auto d = nominal_design();
    d.w = 12.0;
    const auto e = evaluate(d, ctx);
    CHECK(e.failed);
    CHECK(e.objective == kFailedObjective);
    CHECK(e.diagnostic.find("geometry") != std::string::npos);
  }

  SUBCASE("PTO-only changes keep the geometry") {
    auto d = nominal_design();
    d.Ap = 0.4;
    CHECK_FALSE(evaluate(d, ctx).failed);
  }

  SUBCASE("coefficients without a geometry tag are refused") {
    auto c = load_coefficients(kSource / "data/hydro/nominal_reference.json");
    c.geometry_hash.clear();
    auto other = nominal_context();
    CHECK_THROWS_AS(use_imported_coefficients(other, c), HydroFormatError);
  }
}

TEST_CASE("stage objectives") {
  const auto a = lcoke_objective(nominal_design(), nominal_context());
  CHECK(a.feasible);
  CHECK(a.value > 0.0);
  CHECK(a.value < kFailedObjective);
  const auto b = lcof_objective(nominal_design(), nominal_context());
  CHECK(b.value > 0.0);
  CHECK(b.value < kFailedObjective);

  // The kinetic-energy stage prices only the flap, so PTO and plant
  // variables do not move it.
  auto d = nominal_design();
  d.Ap = 0.8;
  d.Qpmax = 8000.0;
  CHECK(lcoke_objective(d, nominal_context()).value == a.value);
  // The flow stage replaces the plant by a throttle.
  d = nominal_design();
  d.Qpmax = 8000.0;
  CHECK(lcof_objective(d, nominal_context()).value == b.value);
}

TEST_CASE("evaluation is deterministic") {
  const auto a = evaluation_to_json(evaluate(nominal_design(), nominal_context())).dump();
  const auto b = evaluation_to_json(evaluate(nominal_design(), nominal_context())).dump();
  CHECK(a == b);
}

TEST_CASE("time series export") {
  EvalOptions opt;
  opt.record_series = true;
  const auto e = evaluate(nominal_design(), nominal_context(), opt);
  std::ostringstream out;
  write_timeseries_csv(e.sim.series, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,theta,theta_dot,s,P_feed,Q_perm,Q_brine,Q_relief");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 3001);
}

TEST_CASE("design documents") {
  const auto d = reference_initial_design();
  CHECK(design_from_json(design_to_json(d)) == d);
  auto j = design_to_json(d);
  j.erase("Vacc");
  CHECK_THROWS_AS((void)design_from_json(j), ConfigError);
  j = design_to_json(d);
  j["Vac"] = 1.0;
  CHECK_THROWS_AS((void)design_from_json(j), ConfigError);
  j = design_to_json(d);
  j["w"] = "wide";
  CHECK_THROWS_AS((void)design_from_json(j), ConfigError);
}
