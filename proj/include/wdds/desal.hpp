#pragma once

#include "wdds/params.hpp"

namespace wdds {

struct SeawaterSpec {
  double feed_tds = 35946.0;     // mg/L
  double permeate_tds = 150.0;   // mg/L
  double molar_mass = 58.44;     // g/mol
  double ions_per_molecule = 2.0;
  double temperature = 298.15;   // K
  double gas_constant = 8.314462618;
};

struct MembraneSpec {
  double Q0 = 24.6;        // m^3/day per element
  double A0 = 35.0;        // m^2 per element
  double A_w = 2.57e-12;   // m^3/(N s)
  double eta_RO = 0.442;
};

struct DesalPlant {
  double Qpmax = 0;      // m^3/s
  double A_m = 0;        // m^2
  double A_w = 0;        // m^3/(N s)
  double R_m = 0;        // Pa s/m^3
  double delta_pi = 0;   // Pa
  double P_relief = 0;   // Pa
  double R_t = 0;        // Pa s/m^3
  double eta_RO = 0;
};

[[nodiscard]] SeawaterSpec seawater_spec(const ParameterSet& p);
[[nodiscard]] MembraneSpec membrane_spec(const ParameterSet& p);

/// Van 't Hoff osmotic pressure; tds in mg/L (= g/m^3).
[[nodiscard]] double osmotic_pressure(double tds, const SeawaterSpec& spec);

/// Qpmax in m^3/day.
[[nodiscard]] DesalPlant size_plant(double Qpmax_per_day, const SeawaterSpec& spec,
                                    const MembraneSpec& membrane);
[[nodiscard]] DesalPlant size_plant(double Qpmax_per_day, const ParameterSet& p);

/// Flow through the membrane; the check valve blocks forward osmosis.
[[nodiscard]] double permeate_flow(double P_feed, const DesalPlant& plant);

inline constexpr double kSecondsPerDay = 86400.0;

}  // namespace wdds
