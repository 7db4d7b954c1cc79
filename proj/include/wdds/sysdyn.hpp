#pragma once

#include <string>
#include <vector>

#include "wdds/geometry.hpp"
#include "wdds/hydraulics.hpp"
#include "wdds/hydro.hpp"
#include "wdds/waves.hpp"

namespace wdds {

/// Piston anchored on the seabed at (l2, l3) from the hinge (horizontal,
/// vertical); rod attached on the flap centreline at radius l1.
///
///      attachment (l1 sin th, l1 cos th)
///          |  rod of length s
///   hinge  o---------------- anchor (l2, l3)
struct MechanismConfig {
  double l1 = 2.0;
  double l2 = 4.7;
  double l3 = 0.0;
};

struct PistonKinematics {
  double s;          // m, rod length between anchor and attachment
  double ds_dtheta;  // m/rad
};

/// Throws std::domain_error when the attachment coincides with the anchor.
[[nodiscard]] PistonKinematics piston_kinematics(double theta, const MechanismConfig& mech);

struct ConstraintViolation {
  std::string name;
  double magnitude;   // relative exceedance
  double first_time;  // s
};

struct EnergyLedger {
  double excitation = 0;  // work done by f_e
  double radiated = 0;    // work done against the radiation memory force
  double pto = 0;         // kinetic energy removed by the PTO
  double delta_ke = 0;
  double delta_pe = 0;
};

struct HydraulicLedger {
  double intake = 0;
  double permeate = 0;
  double brine = 0;
  double relief = 0;
  double delta_stored = 0;
  double work_in = 0;       // sum P_feed Q_in dt
  double work_out = 0;      // sum P_feed (Q_perm + Q_brine + Q_relief) dt
  double delta_gas = 0;     // isothermal gas energy change
  double piston_work = 0;   // sum f v dt on the rod (never positive)
  bool dissipative = true;  // every step had f v <= 0
};

struct TimeSeries {
  std::vector<double> t, theta, theta_dot, s, P_feed, Q_perm, Q_brine, Q_relief;
};

struct SimulationResult {
  bool failed = false;
  std::string diagnostic;
  TimeSeries series;  // empty unless recording was requested

  double permeate_volume = 0;  // m^3 after the ramp
  double intake_volume = 0;    // m^3 after the ramp
  double brine_volume = 0;     // m^3 after the ramp
  double max_stroke = 0;       // m, range of s
  double max_pressure = 0;     // Pa
  double max_abs_pitch = 0;    // rad
  double min_cyl_pressure = 0; // Pa gauge on the suction side
  double accounted_time = 0;   // s, duration - ramp
  double mean_kinetic_energy = 0;  // J, post-ramp mean of 0.5 M theta_dot^2 (M = I + A_inf)
  double mean_theta_dot_sq = 0;    // post-ramp mean
  long empty_steps = 0;
  std::vector<ConstraintViolation> violations;
  EnergyLedger energy;
  HydraulicLedger hydraulic;
};

struct SimOptions {
  bool pto_connected = true;
  OutflowMode outflow = OutflowMode::membrane;
  double R_throttle = 0.0;  // throttle mode only
  double P_max = 0.0;       // Pa, 0 disables the check
  bool record_series = false;
};

/// Inputs shared by every run of one design.
struct SimInputs {
  double inertia = 0;  // I about the hinge, kg m^2
  const HydroCoefficients* coeffs = nullptr;
  const RadiationKernel* kernel = nullptr;
  const WaveRealization* wave = nullptr;
  MechanismConfig mech;
  CircuitConfig circuit;
  double Ap = 0.26;
  double cracking_pressure = 0.05e6;
  double stroke_max = 20.0;
  double min_cylinder_pressure = -98155.0;
  /// Gas pressure at t = 0; the accumulator starts empty when this does not
  /// exceed the precharge.
  double initial_pressure = 0.0;
};

/// Cummins equation with hydraulic PTO. Fixed step wave.dt; the body is
/// advanced by RK4 and the PTO by implicit half-steps on either side.
[[nodiscard]] SimulationResult simulate(const SimInputs& in, const SimOptions& opt);

inline constexpr double kSecondsPerYear = 31'536'000.0;

/// Permeate scaled to a year of operation.
[[nodiscard]] double annual_water_production(const SimulationResult& r, double availability);

/// Annualised mean kinetic energy (kWh/yr) of the PTO-free flap in a
/// regular wave of period Tp and amplitude Hs/2: mean 0.5 (I + A(w_p))
/// theta_dot^2 per wave cycle, times cycles per year.
[[nodiscard]] double kinetic_energy_metric(double inertia, const HydroCoefficients& coeffs,
                                           const RadiationKernel& kernel,
                                           const SeaState& sea, double dt, double duration,
                                           double ramp_time);

}  // namespace wdds
