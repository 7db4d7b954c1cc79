#include <doctest.h>

#include <cmath>
#include <random>

#include "wdds/hydraulics.hpp"

using namespace wdds;

namespace {

CircuitConfig nominal_circuit() {
  const auto p = default_params();
  return make_circuit(4.0, 3e6, size_plant(3150.0, p), p.pto.relief_conductance_factor);
}

double balance_residual(const HydraulicState& s) {
  return s.intake - (s.permeate + s.brine + s.relief + s.V_liquid);
}

}  // namespace

TEST_CASE("isothermal accumulator") {
  CHECK(accumulator_pressure(0.0, 4.0, 3e6) == 3e6);
  CHECK(accumulator_pressure(2.0, 4.0, 3e6) == doctest::Approx(6e6).epsilon(1e-15));
  CHECK(accumulator_pressure(0.49, 2.45, 5.73e6) == doctest::Approx(7.1625e6).epsilon(1e-12));
  CHECK_THROWS_AS((void)accumulator_pressure(4.0, 4.0, 3e6), AccumulatorOverfull);
  CHECK(accumulator_energy(0.0, 4.0, 3e6) == 0.0);
  CHECK(accumulator_energy(2.0, 4.0, 3e6) == doctest::Approx(3e6 * 4.0 * std::log(2.0)));
}

TEST_CASE("idle circuit stays idle") {
  const auto cfg = nominal_circuit();
  const HydraulicState s;
  const auto out = step_circuit(s, 0.0, cfg, 0.1);
  CHECK(out.flows.total() == 0.0);
  CHECK(out.state.V_liquid == 0.0);
  CHECK(out.state.intake == 0.0);
  CHECK(out.state.permeate == 0.0);
}

TEST_CASE("outflow branches") {
  const auto cfg = nominal_circuit();
  const auto& pl = cfg.plant;
  auto f = outflows(0.5 * pl.delta_pi, cfg);
  CHECK(f.permeate == 0.0);
  CHECK(f.relief == 0.0);
  CHECK(f.brine == doctest::Approx(0.5 * pl.delta_pi / pl.R_t));
  f = outflows(pl.P_relief, cfg);
  CHECK(f.permeate == doctest::Approx(pl.Qpmax).epsilon(1e-12));
  CHECK(f.relief == 0.0);
  f = outflows(pl.P_relief + 1e5, cfg);
  CHECK(f.relief == doctest::Approx(cfg.k_relief * 1e5));

  CircuitConfig thr = cfg;
  thr.mode = OutflowMode::throttle;
  thr.R_throttle = 2e8;
  f = outflows(4e6, thr);
  CHECK(f.brine == doctest::Approx(0.02));
  CHECK(f.permeate == 0.0);
  CHECK(f.relief == 0.0);
}

TEST_CASE("steady inflow settles at relief pressure with the design recovery") {
  const auto cfg = nominal_circuit();
  const auto& pl = cfg.plant;
  const double Q_in = pl.Qpmax / pl.eta_RO;
  HydraulicState s;
  CircuitStep last;
  for (int n = 0; n < 20000; ++n) {
    last = step_circuit(s, Q_in, cfg, 0.1);
    s = last.state;
  }
  CHECK(s.P_feed == doctest::Approx(pl.P_relief).epsilon(1e-8));
  CHECK(last.flows.relief == doctest::Approx(0.0).scale(pl.Qpmax * 1e-8));
  const double recovery = last.flows.permeate / (last.flows.permeate + last.flows.brine);
  CHECK(recovery == doctest::Approx(pl.eta_RO).epsilon(1e-8));
  CHECK(s.V_liquid == doctest::Approx(4.0 * (1.0 - 3e6 / pl.P_relief)).epsilon(1e-6));

  // Extra inflow above the design point is taken by the relief valve.
  const double extra = 0.05;
  for (int n = 0; n < 20000; ++n) {
    last = step_circuit(s, Q_in + extra, cfg, 0.1);
    s = last.state;
  }
  CHECK(last.flows.total() == doctest::Approx(Q_in + extra).epsilon(1e-9));
  CHECK(last.flows.relief > 0.0);
  CHECK(s.P_feed > pl.P_relief);
}

TEST_CASE("volume impulse is conserved") {
  const auto cfg = nominal_circuit();
  const double dV = 0.3, dt = 0.1;
  HydraulicState s;
  s = step_circuit(s, dV / dt, cfg, dt).state;
  CHECK(std::abs(balance_residual(s)) < 1e-9);
  CHECK(s.V_liquid > 0.0);
  CHECK(s.V_liquid < dV);
  for (int n = 0; n < 3000; ++n) s = step_circuit(s, 0.0, cfg, dt).state;
  CHECK(std::abs(balance_residual(s)) < 1e-9);
  CHECK(s.V_liquid == 0.0);
  CHECK(s.empty_steps > 0);
}

TEST_CASE("random inflow keeps the books balanced") {
  const auto cfg = nominal_circuit();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<> q(0.0, 0.4);
  HydraulicState s;
  for (int n = 0; n < 5000; ++n) {
    const double Q = n % 7 < 3 ? 0.0 : q(rng);
    s = step_circuit(s, Q, cfg, 0.1).state;
    REQUIRE(s.P_feed >= 0.0);
  }
  CHECK(std::abs(balance_residual(s)) < 1e-9 * s.intake);
}

TEST_CASE("node pressure matches the stepped state") {
  const auto cfg = nominal_circuit();
  HydraulicState s;
  s.V_liquid = 1.2;
  const double P = node_pressure(s, 0.1, cfg, 0.1);
  const auto out = step_circuit(s, 0.1, cfg, 0.1);
  CHECK(P == out.state.P_feed);
  CHECK(accumulator_pressure(out.state.V_liquid, cfg.Vacc, cfg.P0) ==
        doctest::Approx(P).epsilon(1e-10));
}

TEST_CASE("piston coupling") {
  auto c = piston_coupling(0.0, 5e6, 0.26, 0.05e6);
  CHECK(c.Q_out == 0.0);
  CHECK(c.force == 0.0);
  c = piston_coupling(0.5, 5e6, 0.26, 0.05e6);
  CHECK(c.Q_out == doctest::Approx(0.13));
  c = piston_coupling(-0.5, 5e6, 0.26, 0.05e6);
  CHECK(c.Q_out == doctest::Approx(0.13));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<> v(-3.0, 3.0), P(1.0, 8e6);
  for (int i = 0; i < 1000; ++i) {
    const double vi = v(rng);
    const auto r = piston_coupling(vi, P(rng), 0.4, 0.05e6);
    CHECK(r.force * vi < 0.0);
    CHECK(r.Q_out >= 0.0);
  }
}
