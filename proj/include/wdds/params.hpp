#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace wdds {

/// Raised for any malformed, incomplete or out-of-range parameter input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Environment, sea state and financing constants. All values SI.
struct GeneralParams {
  double gravity = 9.81;             // m/s^2
  double rho = 1025.0;               // kg/m^3
  double distance_to_shore = 500.0;  // m
  double temperature = 298.15;       // K
  double depth = 12.0;               // m
  double wave_direction = 0.0;       // rad
  double hs = 2.64;                  // m
  double tp = 9.86;                  // s
  double fcr = 0.108;                // 1/yr
  double availability = 1.0;         // -

  friend bool operator==(const GeneralParams&, const GeneralParams&) = default;
};

struct SwroParams {
  double feed_tds = 35946.0;            // mg/L == g/m^3
  double permeate_tds = 150.0;          // mg/L
  double molar_mass = 58.44;            // g/mol
  double ions_per_molecule = 2.0;       // -
  double gas_constant = 8.314462618;    // J/(K mol)
  double water_permeability = 2.57e-12; // m^3/(N s)
  double recovery_ratio = 0.442;        // -
  double element_area = 35.0;           // m^2
  double element_flow = 24.6 / 86400.0; // m^3/s

  friend bool operator==(const SwroParams&, const SwroParams&) = default;
};

struct WecParams {
  double draft = 9.0;              // m
  double height = 9.1;             // m
  double cg_draft_factor = -0.7778;
  double unit_inertia = 14.57;     // m^2
  double rm5_area = 1214.0;        // m^2
  double rm5_flap_cost = 3364648.63;
  double rm5_base_cost = 1706415.27;
  double rm5_bearings_cost = 17420.34;
  double rm5_mooring_cost = 997819.2;
  double rm5_monitoring_cost = 616480.27;   // $/yr
  double rm5_marine_ops_cost = 101387.23;   // $/yr
  double rm5_shore_ops_cost = 347280.29;    // $/yr
  double rm5_parts_cost = 86237.2;          // $/yr
  double rm5_consumables_cost = 17480.19;   // $/yr
  double rm5_insurance_rate = 0.02;         // 1/yr of reference CAPEX

  friend bool operator==(const WecParams&, const WecParams&) = default;
};

struct PtoParams {
  double l2 = 4.7;                       // m
  double l3 = 0.0;                       // m
  double stroke_max = 20.0;              // m
  double ss316_cost = 2.00 / 1.6387064e-5;  // $/m^3 (2.00 $/in^3)
  double ss316_density = 0.29 * 27679.9047; // kg/m^3 (0.29 lb/in^3)
  double ss316_yield = 206e6;            // Pa
  double ss316_modulus = 164e9;          // Pa
  double fos_cylinder = 6.0;
  double fos_rod = 1.5;
  double labor_factor = 0.7;
  double cap_attachment_factor = 0.3;
  double joint_efficiency = 0.8;
  double cracking_pressure = 0.05e6;     // Pa
  double relief_conductance_factor = 100.0;  // k_relief = factor / R_m
  double max_pressure_factor = 1.5;      // P_max = factor * P_relief
  double min_cylinder_pressure = -98155.0;   // Pa gauge (vapour limit at 25 C)
  double accumulator_cost_coeff = 1.621e5;
  double accumulator_cost_exp = 0.986;
  double stroke_margin = 1.1;

  friend bool operator==(const PtoParams&, const PtoParams&) = default;
};

struct SolverParams {
  double omega_min = 0.2;     // rad/s
  double omega_step = 0.14;   // rad/s
  double omega_max = 3.0;     // rad/s
  double dt = 0.1;            // s
  double sim_time = 300.0;    // s
  double ramp_time = 10.0;    // s
  double n_components = 200;  // -
  double kernel_duration = 20.0;  // s

  friend bool operator==(const SolverParams&, const SolverParams&) = default;
};

enum class IntakeScreen { band, wedgewire, microscreen };
enum class Stabilization { lime, calcite };

struct EconParams {
  double inflation = 1.26;  // 2018 USD -> 2025 USD
  IntakeScreen intake = IntakeScreen::wedgewire;
  Stabilization stabilization = Stabilization::lime;

  friend bool operator==(const EconParams&, const EconParams&) = default;
};

/// Every fixed model constant, normalised to SI at load time.
struct ParameterSet {
  GeneralParams general;
  SwroParams swro;
  WecParams wec;
  PtoParams pto;
  SolverParams solver;
  EconParams econ;

  /// Tabulated frequency grid implied by the solver section.
  [[nodiscard]] std::vector<double> omega_grid() const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

/// The bundled default set.
[[nodiscard]] ParameterSet default_params();

/// Loads a parameter document. A document is either complete (every key of
/// every section present) or declares `"extends": "default"` and then only
/// overrides the keys it names. Throws ConfigError naming the offending key.
[[nodiscard]] ParameterSet load_params(const std::filesystem::path& path);
[[nodiscard]] ParameterSet params_from_json(const nlohmann::json& doc);

/// Serialises as {"value", "unit"} pairs in SI units; load(save(p)) == p.
[[nodiscard]] nlohmann::json params_to_json(const ParameterSet& p);
void save_params(const ParameterSet& p, const std::filesystem::path& path);

/// FNV-1a over the canonical JSON dump of the set.
[[nodiscard]] std::uint64_t params_checksum(const ParameterSet& p);

[[nodiscard]] std::string_view to_string(IntakeScreen s);
[[nodiscard]] std::string_view to_string(Stabilization s);
[[nodiscard]] IntakeScreen parse_intake(std::string_view s);
[[nodiscard]] Stabilization parse_stabilization(std::string_view s);

}  // namespace wdds
