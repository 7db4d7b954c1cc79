#pragma once

#include <stdexcept>

#include "wdds/desal.hpp"

namespace wdds {

class AccumulatorOverfull : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Isothermal gas law. Returns P0 at V_liquid = 0; throws when V_liquid >= Vacc.
[[nodiscard]] double accumulator_pressure(double V_liquid, double Vacc, double P0);

/// Energy stored in the gas relative to precharge, P0 Vacc ln(Vacc/(Vacc - V)).
[[nodiscard]] double accumulator_energy(double V_liquid, double Vacc, double P0);

enum class OutflowMode {
  membrane,  // relief valve + membrane + brine throttle
  throttle,  // a single linear throttle replaces everything downstream
};

struct CircuitConfig {
  double Vacc = 4.0;
  double P0 = 3e6;
  DesalPlant plant;
  double k_relief = 0.0;  // m^3/(s Pa)
  OutflowMode mode = OutflowMode::membrane;
  double R_throttle = 0.0;  // Pa s/m^3, throttle mode only
};

[[nodiscard]] CircuitConfig make_circuit(double Vacc, double P0, const DesalPlant& plant,
                                         double relief_conductance_factor);

struct Flows {
  double permeate = 0;
  double brine = 0;
  double relief = 0;

  [[nodiscard]] double total() const { return permeate + brine + relief; }
};

/// Flows leaving the feed node at gauge pressure P.
[[nodiscard]] Flows outflows(double P, const CircuitConfig& cfg);

struct HydraulicState {
  double V_liquid = 0.0;
  double P_feed = 0.0;
  double intake = 0.0;    // cumulative m^3
  double permeate = 0.0;
  double brine = 0.0;
  double relief = 0.0;
  long empty_steps = 0;   // steps spent with the accumulator drained
};

struct CircuitStep {
  HydraulicState state;
  Flows flows;  // constant over the step
  bool empty = false;
};

/// Backward-Euler step of the feed node over `dt` with a constant rectified
/// inflow. Volumes are advanced with the same flows, so intake = outflow +
/// change in stored liquid holds to rounding.
[[nodiscard]] CircuitStep step_circuit(const HydraulicState& s, double Q_in,
                                       const CircuitConfig& cfg, double dt);

/// Node pressure alone (same solve as step_circuit).
[[nodiscard]] double node_pressure(const HydraulicState& s, double Q_in,
                                   const CircuitConfig& cfg, double dt);

struct PistonCoupling {
  double Q_out;  // m^3/s
  double force;  // N on the piston rod, opposing motion
};

/// Double-acting piston with ideal rectifying valves; both strokes pump.
[[nodiscard]] PistonCoupling piston_coupling(double v_piston, double P_feed, double Ap,
                                             double cracking_pressure);

}  // namespace wdds
