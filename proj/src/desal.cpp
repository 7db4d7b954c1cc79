#include "wdds/desal.hpp"

#include <algorithm>

namespace wdds {

SeawaterSpec seawater_spec(const ParameterSet& p) {
  return {p.swro.feed_tds,          p.swro.permeate_tds,  p.swro.molar_mass,
          p.swro.ions_per_molecule, p.general.temperature, p.swro.gas_constant};
}

MembraneSpec membrane_spec(const ParameterSet& p) {
  return {p.swro.element_flow * kSecondsPerDay, p.swro.element_area,
          p.swro.water_permeability, p.swro.recovery_ratio};
}

double osmotic_pressure(double tds, const SeawaterSpec& spec) {
  const double molar = tds / spec.molar_mass;  // mol/m^3
  return spec.ions_per_molecule * molar * spec.gas_constant * spec.temperature;
}

DesalPlant size_plant(double Qpmax_per_day, const SeawaterSpec& spec,
                      const MembraneSpec& membrane) {
  DesalPlant plant;
  plant.Qpmax = Qpmax_per_day / kSecondsPerDay;
  plant.A_m = Qpmax_per_day / membrane.Q0 * membrane.A0;
  plant.A_w = membrane.A_w;
  plant.R_m = 1.0 / (membrane.A_w * plant.A_m);
  plant.delta_pi = osmotic_pressure(spec.feed_tds, spec) -
                   osmotic_pressure(spec.permeate_tds, spec);
  plant.P_relief = plant.Qpmax * plant.R_m + plant.delta_pi;
  plant.eta_RO = membrane.eta_RO;
  plant.R_t = plant.P_relief / (plant.Qpmax * (1.0 / membrane.eta_RO - 1.0));
  return plant;
}

DesalPlant size_plant(double Qpmax_per_day, const ParameterSet& p) {
  return size_plant(Qpmax_per_day, seawater_spec(p), membrane_spec(p));
}

double permeate_flow(double P_feed, const DesalPlant& plant) {
  return std::max(0.0, (P_feed - plant.delta_pi) / plant.R_m);
}

}  // namespace wdds
