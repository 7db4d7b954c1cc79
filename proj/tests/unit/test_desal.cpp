#include <doctest.h>

#include <cmath>

#include "wdds/desal.hpp"

using namespace wdds;

namespace {

// Independent hand evaluation of the plant sizing chain.
constexpr double kR = 8.314462618, kT = 298.15, kM = 58.44;
double vant_hoff(double tds) { return 2.0 * tds / kM * kR * kT; }

bool rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_CASE("osmotic pressure") {
  const auto spec = seawater_spec(default_params());
  CHECK(osmotic_pressure(0.0, spec) == 0.0);
  CHECK(rel(osmotic_pressure(35946.0, spec), vant_hoff(35946.0), 1e-12));
  CHECK(osmotic_pressure(35946.0, spec) == doctest::Approx(3.049e6).epsilon(5e-4));
  CHECK(osmotic_pressure(150.0, spec) == doctest::Approx(0.01273e6).epsilon(5e-4));
}

TEST_CASE("nominal plant sizing") {
  const auto p = size_plant(3150.0, default_params());
  const double dpi = vant_hoff(35946.0) - vant_hoff(150.0);
  const double A_m = 3150.0 / 24.6 * 35.0;
  const double R_m = 1.0 / (2.57e-12 * A_m);
  const double Qp = 3150.0 / 86400.0;
  const double P_relief = Qp * R_m + dpi;
  const double R_t = P_relief / (Qp * (1.0 - 0.442) / 0.442);

  CHECK(rel(p.delta_pi, dpi, 1e-12));
  CHECK(rel(p.A_m, A_m, 1e-12));
  CHECK(rel(p.R_m, R_m, 1e-12));
  CHECK(rel(p.P_relief, P_relief, 1e-12));
  CHECK(rel(p.R_t, R_t, 1e-12));

  CHECK(p.delta_pi == doctest::Approx(3.037e6).epsilon(5e-4));
  CHECK(p.A_m == doctest::Approx(4481.7).epsilon(1e-5));
  CHECK(p.R_m == doctest::Approx(8.682e7).epsilon(5e-4));
  CHECK(p.P_relief == doctest::Approx(6.202e6).epsilon(5e-4));
  CHECK(p.R_t == doctest::Approx(1.347e8).epsilon(5e-4));
}

TEST_CASE("permeate flow") {
  const auto p = size_plant(3150.0, default_params());
  CHECK(permeate_flow(p.delta_pi, p) == 0.0);
  CHECK(permeate_flow(0.5 * p.delta_pi, p) == 0.0);
  CHECK(permeate_flow(-1e5, p) == 0.0);
  CHECK(permeate_flow(p.P_relief, p) == doctest::Approx(p.Qpmax).epsilon(1e-12));
}

TEST_CASE("recovery identity holds at relief pressure") {
  for (double q : {1000.0, 3150.0, 4882.0, 10000.0}) {
    const auto p = size_plant(q, default_params());
    const double Qp = permeate_flow(p.P_relief, p);
    const double Qb = p.P_relief / p.R_t;
    CHECK(Qp / (Qp + Qb) == doctest::Approx(p.eta_RO).epsilon(1e-12));
  }
}

TEST_CASE("membrane area scales with capacity") {
  const auto a = size_plant(2000.0, default_params());
  const auto b = size_plant(4000.0, default_params());
  CHECK(b.A_m == doctest::Approx(2.0 * a.A_m));
  CHECK(b.R_m == doctest::Approx(0.5 * a.R_m));
  CHECK(b.P_relief == doctest::Approx(a.P_relief));
}
