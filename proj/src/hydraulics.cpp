#include "wdds/hydraulics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wdds {
namespace {

// Pressure at which the total outflow equals q (q >= 0). Outflow is
// piecewise linear and strictly increasing in P.
double equilibrium_pressure(double q, const CircuitConfig& cfg) {
  if (q <= 0.0) return 0.0;
  if (cfg.mode == OutflowMode::throttle) return q * cfg.R_throttle;
  const auto& pl = cfg.plant;
  const double g_brine = 1.0 / pl.R_t;
  const double g_perm = 1.0 / pl.R_m;
  // Segment 1: brine only, up to delta_pi.
  const double q1 = pl.delta_pi * g_brine;
  if (q <= q1) return q / g_brine;
  // Segment 2: brine + permeate, up to P_relief.
  const double q2 = pl.P_relief * g_brine + (pl.P_relief - pl.delta_pi) * g_perm;
  if (q <= q2 || cfg.k_relief <= 0.0) {
    return (q + pl.delta_pi * g_perm) / (g_brine + g_perm);
  }
  // Segment 3: relief open.
  return (q + pl.delta_pi * g_perm + pl.P_relief * cfg.k_relief) /
         (g_brine + g_perm + cfg.k_relief);
}

double outflow_slope(double P, const CircuitConfig& cfg) {
  if (cfg.mode == OutflowMode::throttle) return 1.0 / cfg.R_throttle;
  const auto& pl = cfg.plant;
  double s = 1.0 / pl.R_t;
  if (P > pl.delta_pi) s += 1.0 / pl.R_m;
  if (P > pl.P_relief) s += cfg.k_relief;
  return s;
}

struct NodeSolution {
  double P;
  bool empty;
};

NodeSolution solve_node(const HydraulicState& s, double Q_in, const CircuitConfig& cfg,
                        double dt) {
  const double Vn = s.V_liquid;
  const double P0 = cfg.P0;
  // Residual in P for the implicit volume update; increasing in P.
  auto g = [&](double P) {
    return cfg.Vacc * (1.0 - P0 / P) - Vn - dt * (Q_in - outflows(P, cfg).total());
  };
  if (g(P0) >= 0.0) {
    // Accumulator drains within the step: node pressure falls below
    // precharge and is set by the flow balance alone.
    return {std::min(P0, equilibrium_pressure(Q_in + Vn / dt, cfg)), true};
  }
  double lo = P0;
  double hi = std::max(2.0 * P0, P0 * cfg.Vacc / std::max(cfg.Vacc - Vn, 1e-300));
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  double P = hi;
  for (int it = 0; it < 200; ++it) {
    const double r = g(P);
    if (r == 0.0) break;
    if (r > 0.0) hi = P; else lo = P;
    const double dr = cfg.Vacc * P0 / (P * P) + dt * outflow_slope(P, cfg);
    double next = P - r / dr;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - P) <= 1e-13 * P) {
      P = next;
      break;
    }
    P = next;
  }
  return {P, false};
}

}  // namespace

double accumulator_pressure(double V_liquid, double Vacc, double P0) {
  if (V_liquid >= Vacc) {
    throw AccumulatorOverfull("accumulator liquid volume reached the gas volume");
  }
  if (V_liquid <= 0.0) return P0;
  return P0 * Vacc / (Vacc - V_liquid);
}

double accumulator_energy(double V_liquid, double Vacc, double P0) {
  if (V_liquid <= 0.0) return 0.0;
  return P0 * Vacc * std::log(Vacc / (Vacc - V_liquid));
}

CircuitConfig make_circuit(double Vacc, double P0, const DesalPlant& plant,
                           double relief_conductance_factor) {
  CircuitConfig c;
  c.Vacc = Vacc;
  c.P0 = P0;
  c.plant = plant;
  c.k_relief = relief_conductance_factor / plant.R_m;
  return c;
}

Flows outflows(double P, const CircuitConfig& cfg) {
  Flows f;
  if (P <= 0.0) return f;
  if (cfg.mode == OutflowMode::throttle) {
    f.brine = P / cfg.R_throttle;
    return f;
  }
  f.permeate = permeate_flow(P, cfg.plant);
  f.brine = P / cfg.plant.R_t;
  f.relief = cfg.k_relief * std::max(0.0, P - cfg.plant.P_relief);
  return f;
}

double node_pressure(const HydraulicState& s, double Q_in, const CircuitConfig& cfg,
                     double dt) {
  return solve_node(s, Q_in, cfg, dt).P;
}

CircuitStep step_circuit(const HydraulicState& s, double Q_in, const CircuitConfig& cfg,
                         double dt) {
  const auto sol = solve_node(s, Q_in, cfg, dt);
  CircuitStep out;
  out.flows = outflows(sol.P, cfg);
  out.empty = sol.empty;
  out.state = s;
  auto& n = out.state;
  const double dV = dt * (Q_in - out.flows.total());
  n.V_liquid = sol.empty ? 0.0 : std::max(0.0, s.V_liquid + dV);
  n.P_feed = sol.P;
  n.intake += dt * Q_in;
  n.permeate += dt * out.flows.permeate;
  n.brine += dt * out.flows.brine;
  n.relief += dt * out.flows.relief;
  if (sol.empty) ++n.empty_steps;
  return out;
}

PistonCoupling piston_coupling(double v_piston, double P_feed, double Ap,
                               double cracking_pressure) {
  if (v_piston == 0.0) return {0.0, 0.0};
  const double sign = v_piston > 0.0 ? 1.0 : -1.0;
  // Discharge side sees the feed pressure plus the outlet valve crack; the
  // suction side sits one crack below ambient.
  const double dp = std::max(P_feed, 0.0) + 2.0 * cracking_pressure;
  return {Ap * std::abs(v_piston), -sign * Ap * dp};
}

}  // namespace wdds
