#include "wdds/params.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

namespace wdds {
namespace {

using nlohmann::json;

enum class Dim {
  none, length, mass, time, pressure, density, accel, temperature, angle,
  flow, area, usd, usd_per_year, per_year, permeability, molar_mass,
  gas_constant, frequency, usd_per_volume, count,
};

struct UnitDef {
  Dim dim;
  double to_si;
};

// Unit string -> (dimension, multiplier into SI).
const std::map<std::string, UnitDef, std::less<>>& unit_table() {
  static const std::map<std::string, UnitDef, std::less<>> table = {
      {"-", {Dim::none, 1.0}},
      {"%", {Dim::none, 0.01}},
      {"m", {Dim::length, 1.0}},
      {"mm", {Dim::length, 1e-3}},
      {"in", {Dim::length, 0.0254}},
      {"kg", {Dim::mass, 1.0}},
      {"t", {Dim::mass, 1e3}},
      {"s", {Dim::time, 1.0}},
      {"min", {Dim::time, 60.0}},
      {"h", {Dim::time, 3600.0}},
      {"Pa", {Dim::pressure, 1.0}},
      {"kPa", {Dim::pressure, 1e3}},
      {"MPa", {Dim::pressure, 1e6}},
      {"GPa", {Dim::pressure, 1e9}},
      {"kg/m^3", {Dim::density, 1.0}},
      {"lb/in^3", {Dim::density, 27679.9047}},
      {"m/s^2", {Dim::accel, 1.0}},
      {"K", {Dim::temperature, 1.0}},
      {"rad", {Dim::angle, 1.0}},
      {"deg", {Dim::angle, std::numbers::pi / 180.0}},
      {"m^3/s", {Dim::flow, 1.0}},
      {"m^3/day", {Dim::flow, 1.0 / 86400.0}},
      {"m^2", {Dim::area, 1.0}},
      {"$", {Dim::usd, 1.0}},
      {"$/yr", {Dim::usd_per_year, 1.0}},
      {"1/yr", {Dim::per_year, 1.0}},
      {"%/yr", {Dim::per_year, 0.01}},
      {"m^3/(N*s)", {Dim::permeability, 1.0}},
      {"g/mol", {Dim::molar_mass, 1.0}},
      {"J/(K*mol)", {Dim::gas_constant, 1.0}},
      {"rad/s", {Dim::frequency, 1.0}},
      {"$/m^3", {Dim::usd_per_volume, 1.0}},
      {"$/in^3", {Dim::usd_per_volume, 1.0 / 1.6387064e-5}},
      {"count", {Dim::count, 1.0}},
  };
  return table;
}

// Descriptor of one numeric parameter: where it lives, its dimension, the
// unit it is written in, and its admissible range (SI).
struct Descriptor {
  std::string section;
  std::string key;
  double* (*field)(ParameterSet&);
  Dim dim;
  std::string display_unit;
  double lo;
  double hi;
};

#define WDDS_FIELD(sec, member) [](ParameterSet& p) -> double* { return &p.sec.member; }

constexpr double inf = std::numeric_limits<double>::infinity();

const std::vector<Descriptor>& descriptors() {
  static const std::vector<Descriptor> d = {
      {"general", "gravity", WDDS_FIELD(general, gravity), Dim::accel, "m/s^2", 1e-9, inf},
      {"general", "rho", WDDS_FIELD(general, rho), Dim::density, "kg/m^3", 1e-9, inf},
      {"general", "distance_to_shore", WDDS_FIELD(general, distance_to_shore), Dim::length, "m", 0, inf},
      {"general", "temperature", WDDS_FIELD(general, temperature), Dim::temperature, "K", 1e-9, inf},
      {"general", "depth", WDDS_FIELD(general, depth), Dim::length, "m", 1e-9, inf},
      {"general", "wave_direction", WDDS_FIELD(general, wave_direction), Dim::angle, "deg", -2 * std::numbers::pi, 2 * std::numbers::pi},
      {"general", "hs", WDDS_FIELD(general, hs), Dim::length, "m", 1e-9, inf},
      {"general", "tp", WDDS_FIELD(general, tp), Dim::time, "s", 1e-9, inf},
      {"general", "fcr", WDDS_FIELD(general, fcr), Dim::per_year, "%/yr", 0, 1},
      {"general", "availability", WDDS_FIELD(general, availability), Dim::none, "-", 0, 1},

      {"swro", "feed_tds", WDDS_FIELD(swro, feed_tds), Dim::none, "-", 0, inf},
      {"swro", "permeate_tds", WDDS_FIELD(swro, permeate_tds), Dim::none, "-", 0, inf},
      {"swro", "molar_mass", WDDS_FIELD(swro, molar_mass), Dim::molar_mass, "g/mol", 1e-9, inf},
      {"swro", "ions_per_molecule", WDDS_FIELD(swro, ions_per_molecule), Dim::none, "-", 1, inf},
      {"swro", "gas_constant", WDDS_FIELD(swro, gas_constant), Dim::gas_constant, "J/(K*mol)", 1e-9, inf},
      {"swro", "water_permeability", WDDS_FIELD(swro, water_permeability), Dim::permeability, "m^3/(N*s)", 1e-30, inf},
      {"swro", "recovery_ratio", WDDS_FIELD(swro, recovery_ratio), Dim::none, "%", 1e-9, 1 - 1e-9},
      {"swro", "element_area", WDDS_FIELD(swro, element_area), Dim::area, "m^2", 1e-9, inf},
      {"swro", "element_flow", WDDS_FIELD(swro, element_flow), Dim::flow, "m^3/day", 1e-12, inf},

      {"wec", "draft", WDDS_FIELD(wec, draft), Dim::length, "m", 1e-9, inf},
      {"wec", "height", WDDS_FIELD(wec, height), Dim::length, "m", 1e-9, inf},
      {"wec", "cg_draft_factor", WDDS_FIELD(wec, cg_draft_factor), Dim::none, "-", -1, 0},
      {"wec", "unit_inertia", WDDS_FIELD(wec, unit_inertia), Dim::area, "m^2", 0, inf},
      {"wec", "rm5_area", WDDS_FIELD(wec, rm5_area), Dim::area, "m^2", 1e-9, inf},
      {"wec", "rm5_flap_cost", WDDS_FIELD(wec, rm5_flap_cost), Dim::usd, "$", 0, inf},
      {"wec", "rm5_base_cost", WDDS_FIELD(wec, rm5_base_cost), Dim::usd, "$", 0, inf},
      {"wec", "rm5_bearings_cost", WDDS_FIELD(wec, rm5_bearings_cost), Dim::usd, "$", 0, inf},
      {"wec", "rm5_mooring_cost", WDDS_FIELD(wec, rm5_mooring_cost), Dim::usd, "$", 0, inf},
      {"wec", "rm5_monitoring_cost", WDDS_FIELD(wec, rm5_monitoring_cost), Dim::usd_per_year, "$/yr", 0, inf},
      {"wec", "rm5_marine_ops_cost", WDDS_FIELD(wec, rm5_marine_ops_cost), Dim::usd_per_year, "$/yr", 0, inf},
      {"wec", "rm5_shore_ops_cost", WDDS_FIELD(wec, rm5_shore_ops_cost), Dim::usd_per_year, "$/yr", 0, inf},
      {"wec", "rm5_parts_cost", WDDS_FIELD(wec, rm5_parts_cost), Dim::usd_per_year, "$/yr", 0, inf},
      {"wec", "rm5_consumables_cost", WDDS_FIELD(wec, rm5_consumables_cost), Dim::usd_per_year, "$/yr", 0, inf},
      {"wec", "rm5_insurance_rate", WDDS_FIELD(wec, rm5_insurance_rate), Dim::per_year, "%/yr", 0, 1},

      {"pto", "l2", WDDS_FIELD(pto, l2), Dim::length, "m", -inf, inf},
      {"pto", "l3", WDDS_FIELD(pto, l3), Dim::length, "m", -inf, inf},
      {"pto", "stroke_max", WDDS_FIELD(pto, stroke_max), Dim::length, "m", 1e-9, inf},
      {"pto", "ss316_cost", WDDS_FIELD(pto, ss316_cost), Dim::usd_per_volume, "$/in^3", 0, inf},
      {"pto", "ss316_density", WDDS_FIELD(pto, ss316_density), Dim::density, "lb/in^3", 1e-9, inf},
      {"pto", "ss316_yield", WDDS_FIELD(pto, ss316_yield), Dim::pressure, "MPa", 1e-9, inf},
      {"pto", "ss316_modulus", WDDS_FIELD(pto, ss316_modulus), Dim::pressure, "GPa", 1e-9, inf},
      {"pto", "fos_cylinder", WDDS_FIELD(pto, fos_cylinder), Dim::none, "-", 1e-9, inf},
      {"pto", "fos_rod", WDDS_FIELD(pto, fos_rod), Dim::none, "-", 1e-9, inf},
      {"pto", "labor_factor", WDDS_FIELD(pto, labor_factor), Dim::none, "-", 0, inf},
      {"pto", "cap_attachment_factor", WDDS_FIELD(pto, cap_attachment_factor), Dim::none, "-", 1e-9, inf},
      {"pto", "joint_efficiency", WDDS_FIELD(pto, joint_efficiency), Dim::none, "-", 1e-9, 1},
      {"pto", "cracking_pressure", WDDS_FIELD(pto, cracking_pressure), Dim::pressure, "MPa", 0, inf},
      {"pto", "relief_conductance_factor", WDDS_FIELD(pto, relief_conductance_factor), Dim::none, "-", 1e-9, inf},
      {"pto", "max_pressure_factor", WDDS_FIELD(pto, max_pressure_factor), Dim::none, "-", 1, inf},
      {"pto", "min_cylinder_pressure", WDDS_FIELD(pto, min_cylinder_pressure), Dim::pressure, "MPa", -inf, 0},
      {"pto", "accumulator_cost_coeff", WDDS_FIELD(pto, accumulator_cost_coeff), Dim::usd, "$", 0, inf},
      {"pto", "accumulator_cost_exp", WDDS_FIELD(pto, accumulator_cost_exp), Dim::none, "-", 1e-9, inf},
      {"pto", "stroke_margin", WDDS_FIELD(pto, stroke_margin), Dim::none, "-", 1, inf},

      {"solver", "omega_min", WDDS_FIELD(solver, omega_min), Dim::frequency, "rad/s", 1e-9, inf},
      {"solver", "omega_step", WDDS_FIELD(solver, omega_step), Dim::frequency, "rad/s", 1e-9, inf},
      {"solver", "omega_max", WDDS_FIELD(solver, omega_max), Dim::frequency, "rad/s", 1e-9, inf},
      {"solver", "dt", WDDS_FIELD(solver, dt), Dim::time, "s", 1e-9, inf},
      {"solver", "sim_time", WDDS_FIELD(solver, sim_time), Dim::time, "s", 1e-9, inf},
      {"solver", "ramp_time", WDDS_FIELD(solver, ramp_time), Dim::time, "s", 0, inf},
      {"solver", "n_components", WDDS_FIELD(solver, n_components), Dim::count, "count", 2, 1e6},
      {"solver", "kernel_duration", WDDS_FIELD(solver, kernel_duration), Dim::time, "s", 1e-9, inf},

      {"econ", "inflation", WDDS_FIELD(econ, inflation), Dim::none, "-", 1e-9, inf},
  };
  return d;
}

#undef WDDS_FIELD

// Mass concentrations are stored in mg/L, which equals g/m^3; they are kept
// out of the unit table because "mg/L" is the only accepted spelling.
bool is_concentration(const Descriptor& d) {
  return d.key == "feed_tds" || d.key == "permeate_tds";
}

double read_value(const Descriptor& d, const json& node) {
  const std::string where = d.section + "." + d.key;
  double value = 0.0;
  std::string unit;
  if (node.is_number()) {
    value = node.get<double>();
    unit = is_concentration(d) ? "mg/L" : d.display_unit;
  } else if (node.is_object()) {
    if (!node.contains("value") || !node.at("value").is_number()) {
      throw ConfigError("parameter '" + where + "': missing numeric 'value'");
    }
    value = node.at("value").get<double>();
    unit = node.value("unit", is_concentration(d) ? std::string("mg/L") : d.display_unit);
  } else {
    throw ConfigError("parameter '" + where + "': expected number or {value, unit}");
  }
  if (!std::isfinite(value)) {
    throw ConfigError("parameter '" + where + "': value is not finite");
  }

  double si = 0.0;
  if (is_concentration(d)) {
    if (unit != "mg/L" && unit != "g/m^3") {
      throw ConfigError("parameter '" + where + "': unit mismatch, '" + unit +
                        "' is not a mass concentration");
    }
    si = value;
  } else {
    const auto& units = unit_table();
    const auto it = units.find(unit);
    if (it == units.end()) {
      throw ConfigError("parameter '" + where + "': unknown unit '" + unit + "'");
    }
    if (it->second.dim != d.dim) {
      throw ConfigError("parameter '" + where + "': unit mismatch, '" + unit +
                        "' has the wrong dimension");
    }
    si = value * it->second.to_si;
  }
  if (si < d.lo || si > d.hi) {
    throw ConfigError("parameter '" + where + "': value out of range");
  }
  return si;
}

// Written in the SI unit of the dimension so that load(save(p)) is bit-exact.
json write_value(const Descriptor& d, double si) {
  if (is_concentration(d)) {
    return json{{"value", si}, {"unit", "mg/L"}};
  }
  for (const auto& [name, def] : unit_table()) {
    if (def.dim == d.dim && def.to_si == 1.0) {
      return json{{"value", si}, {"unit", name}};
    }
  }
  return json{{"value", si}, {"unit", d.display_unit}};
}

constexpr std::string_view kSchema = "wdds-params/1";

}  // namespace

std::vector<double> ParameterSet::omega_grid() const {
  std::vector<double> grid;
  const double lo = solver.omega_min;
  const double step = solver.omega_step;
  const auto n = static_cast<std::size_t>(std::floor((solver.omega_max - lo) / step + 1e-9)) + 1;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(lo + static_cast<double>(i) * step);
  }
  return grid;
}

ParameterSet default_params() { return ParameterSet{}; }

std::string_view to_string(IntakeScreen s) {
  switch (s) {
    case IntakeScreen::band: return "band";
    case IntakeScreen::wedgewire: return "wedgewire";
    case IntakeScreen::microscreen: return "microscreen";
  }
  return "wedgewire";
}

std::string_view to_string(Stabilization s) {
  return s == Stabilization::lime ? "lime" : "calcite";
}

IntakeScreen parse_intake(std::string_view s) {
  if (s == "band") return IntakeScreen::band;
  if (s == "wedgewire") return IntakeScreen::wedgewire;
  if (s == "microscreen") return IntakeScreen::microscreen;
  throw ConfigError("unknown intake screen option '" + std::string(s) + "'");
}

Stabilization parse_stabilization(std::string_view s) {
  if (s == "lime") return Stabilization::lime;
  if (s == "calcite") return Stabilization::calcite;
  throw ConfigError("unknown stabilization option '" + std::string(s) + "'");
}

ParameterSet params_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("parameter document must be a JSON object");
  }
  bool partial = false;
  std::set<std::string> allowed_top = {"schema", "extends", "options"};
  for (const auto& d : descriptors()) allowed_top.insert(d.section);
  for (const auto& [key, _] : doc.items()) {
    if (!allowed_top.contains(key)) {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (doc.contains("schema") && doc.at("schema") != kSchema) {
    throw ConfigError("unsupported schema '" + doc.at("schema").dump() + "'");
  }
  if (doc.contains("extends")) {
    if (doc.at("extends") != "default") {
      throw ConfigError("'extends' must be \"default\"");
    }
    partial = true;
  }

  ParameterSet p = default_params();

  std::set<std::string> known;
  for (const auto& d : descriptors()) known.insert(d.section + "." + d.key);
  for (const auto& [section, body] : doc.items()) {
    if (section == "schema" || section == "extends" || section == "options") continue;
    if (!body.is_object()) {
      throw ConfigError("section '" + section + "' must be an object");
    }
    for (const auto& [key, _] : body.items()) {
      if (!known.contains(section + "." + key)) {
        throw ConfigError("unknown key '" + section + "." + key + "'");
      }
    }
  }

  for (const auto& d : descriptors()) {
    const bool present = doc.contains(d.section) && doc.at(d.section).contains(d.key);
    if (!present) {
      if (!partial) {
        throw ConfigError("missing key '" + d.section + "." + d.key + "'");
      }
      continue;
    }
    *d.field(p) = read_value(d, doc.at(d.section).at(d.key));
  }

  if (doc.contains("options")) {
    const auto& opt = doc.at("options");
    for (const auto& [key, _] : opt.items()) {
      if (key != "intake" && key != "stabilization") {
        throw ConfigError("unknown key 'options." + key + "'");
      }
    }
    if (opt.contains("intake")) p.econ.intake = parse_intake(opt.at("intake").get<std::string>());
    if (opt.contains("stabilization")) {
      p.econ.stabilization = parse_stabilization(opt.at("stabilization").get<std::string>());
    }
  } else if (!partial) {
    throw ConfigError("missing key 'options'");
  }

  if (p.swro.permeate_tds >= p.swro.feed_tds) {
    throw ConfigError("parameter 'swro.permeate_tds': must be below swro.feed_tds");
  }
  if (p.wec.draft > p.general.depth) {
    throw ConfigError("parameter 'wec.draft': exceeds general.depth");
  }
  if (p.solver.omega_max <= p.solver.omega_min) {
    throw ConfigError("parameter 'solver.omega_max': must exceed solver.omega_min");
  }
  if (p.solver.n_components != std::floor(p.solver.n_components)) {
    throw ConfigError("parameter 'solver.n_components': must be an integer");
  }
  return p;
}

ParameterSet load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open parameter file '" + path.string() + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("parameter file '" + path.string() + "': " + e.what());
  }
  return params_from_json(doc);
}

json params_to_json(const ParameterSet& p) {
  json doc;
  doc["schema"] = kSchema;
  ParameterSet copy = p;
  for (const auto& d : descriptors()) {
    doc[d.section][d.key] = write_value(d, *d.field(copy));
  }
  doc["options"] = {{"intake", to_string(p.econ.intake)},
                    {"stabilization", to_string(p.econ.stabilization)}};
  return doc;
}

void save_params(const ParameterSet& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write parameter file '" + path.string() + "'");
  }
  out << params_to_json(p).dump(2) << '\n';
}

std::uint64_t params_checksum(const ParameterSet& p) {
  const std::string text = params_to_json(p).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace wdds
