#include "wdds/econ.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace wdds {
namespace {

using nlohmann::json;
constexpr double pi = std::numbers::pi;
constexpr std::string_view kCurveSchema = "wdds-swro-curves/1";

double levelize(double fcr, double capex, double opex, double denom) {
  if (!(denom > 0.0)) return kInfeasibleCost;
  return (fcr * capex + opex) / denom;
}

const CostCurve& find_curve(const std::vector<CostCurve>& v, const std::string& id) {
  for (const auto& c : v) {
    if (c.id == id) return c;
  }
  throw std::out_of_range("no cost curve '" + id + "'");
}

}  // namespace

WecCostCoefficients wec_cost_coefficients(const ParameterSet& p) {
  const auto& w = p.wec;
  const double ref_capex =
      w.rm5_flap_cost + w.rm5_base_cost + w.rm5_bearings_cost + w.rm5_mooring_cost;
  return {w.rm5_area,
          w.rm5_flap_cost + w.rm5_base_cost,
          w.rm5_bearings_cost + w.rm5_mooring_cost,
          w.rm5_parts_cost + w.rm5_consumables_cost + w.rm5_insurance_rate * ref_capex,
          w.rm5_monitoring_cost + w.rm5_marine_ops_cost + w.rm5_shore_ops_cost};
}

CapexOpex wec_cost(double wetted_area, const ParameterSet& p) {
  const auto c = wec_cost_coefficients(p);
  const double r = wetted_area / c.A_ref;
  auto model = [r](double c1, double c2) {
    const double log_term = r > 0.0 ? c2 * (1.0 + std::log10(r)) : 0.0;
    return c1 * r + std::max(0.0, log_term);
  };
  return {Usd2025{model(c.capex_c1, c.capex_c2)}, Usd2025{model(c.opex_c1, c.opex_c2)}};
}

CapexOpex wec_cost(const WecGeometry& g, const ParameterSet& p) {
  return wec_cost(g.wetted_area, p);
}

Usd2025 accumulator_cost(double Vacc, const ParameterSet& p) {
  return Usd2025{p.pto.accumulator_cost_coeff * std::pow(Vacc, p.pto.accumulator_cost_exp)};
}

CylinderSizing cylinder_cost(double Ap, double stroke_req, double P_design,
                             const ParameterSet& p) {
  const auto& pp = p.pto;
  CylinderSizing s;
  const double S = pp.ss316_yield / pp.fos_cylinder;
  const double E = pp.joint_efficiency;
  const double denom = S * E - 0.6 * P_design;
  if (!(denom > 0.0)) {
    throw InfeasibleCost("design pressure exceeds the allowable cylinder stress");
  }
  s.radius = std::sqrt(Ap / pi);
  const double d = 2.0 * s.radius;
  s.wall = P_design * s.radius / denom;
  s.cap = d * std::sqrt(pp.cap_attachment_factor * P_design / (S * E));

  // Rod carries the full piston load: yield with margin, and Euler buckling
  // of a pinned column over the stroke.
  const double F = Ap * P_design;
  const double d_tensile = std::sqrt(4.0 * pp.fos_rod * F / (pi * pp.ss316_yield));
  const double L = std::max(stroke_req, 0.0);
  const double d_buckling =
      std::pow(64.0 * pp.fos_rod * F * L * L / (pi * pi * pi * pp.ss316_modulus), 0.25);
  s.rod_diameter = std::max(d_tensile, d_buckling);

  s.length = L + s.cap;
  const double r_out = s.radius + s.wall;
  s.V_cylinder = pi * (r_out * r_out - s.radius * s.radius) * s.length;
  s.V_cap = pi * r_out * r_out * s.cap;
  s.V_piston = pi * s.radius * s.radius * s.cap;
  s.V_rod = pi * s.rod_diameter * s.rod_diameter / 4.0 * s.length;
  s.V_total = s.V_cylinder + 2.0 * s.V_cap + s.V_piston + s.V_rod;
  s.cost = Usd2025{pp.ss316_cost * s.V_total * (1.0 + pp.labor_factor)};
  return s;
}

Usd2018 CostCurve::operator()(double x) const {
  return Usd2018{A * std::pow(x, B) * y_scale};
}

const CostCurve& SwroCurves::capex_curve(const std::string& id) const {
  return find_curve(capex, id);
}

const CostCurve& SwroCurves::opex_curve(const std::string& id) const {
  return find_curve(opex, id);
}

const SwroCurves& default_swro_curves() {
  static const SwroCurves curves = [] {
    SwroCurves c;
    c.capex = {
        {"hdpe_intake", "4.3", "HDPE offshore intake", 0.001792, 0.7837, "feed", 1000.0},
        {"screen_band", "4.5", "Intake screens - band screens", 0.007936, 1.0210, "feed", 1000.0},
        {"screen_wedgewire", "4.6", "Bulk filtration - wedgewire screens", 0.04816, 0.8412, "feed", 1000.0},
        {"screen_microscreen", "4.7", "Intake screens - microscreens", 0.06158, 0.8466, "feed", 1000.0},
        {"pretreatment_upper", "4.10", "Membrane pretreatment - upper bound", 1.0289, 0.8127, "feed", 1000.0},
        {"pretreatment_lower", "4.10", "Membrane pretreatment - lower bound", 0.7656, 0.7904, "feed", 1000.0},
        {"swro_tds46000", "4.13", "Single pass SWRO system - feed TDS 46,000 mg/L", 4.9006, 0.7925, "permeate", 1000.0},
        {"swro_tds35000", "4.13", "Single pass SWRO system - feed TDS 35,000 mg/L", 5.0617, 0.7779, "permeate", 1000.0},
        {"stabilization_lime", "4.18", "Stabilization - lime-CO2", 6.0711, 0.6024, "permeate", 1000.0},
        {"disinfection", "4.19", "Disinfection - bulk sodium hypochlorite", 0.4992, 0.6000, "permeate", 1000.0},
        {"stabilization_calcite", "4.18", "Stabilization - calcite-CO2", 3.2145, 0.6026, "permeate", 1000.0},
    };
    c.opex = {
        {"hdpe_intake", "5.3", "Offshore intake - HDPE pipe", 0.0136, 0.7804, "feed", 1.0},
        {"screen_band", "5.5", "Intake screens - band screens", 0.0002724, 1.0227, "feed", 1000.0},
        {"screen_wedgewire", "5.6", "Bulk filtration - wedgewire screens", 0.001959, 0.8430, "feed", 1000.0},
        {"screen_microscreen", "5.7", "Intake screens - microscreens", 0.002714, 0.8451, "feed", 1000.0},
        {"pretreatment_upper", "5.11", "Membrane pretreatment - upper", 0.04874, 0.8139, "feed", 1000.0},
        {"pretreatment_lower", "5.11", "Membrane pretreatment - lower", 0.05010, 0.7877, "feed", 1000.0},
        {"swro_tds46000", "5.12", "SWRO system - TDS 46,000 mg/L", 0.2098, 0.7922, "permeate", 1000.0},
        {"swro_tds35000", "5.12", "SWRO system - TDS 35,000 mg/L", 0.1969, 0.7814, "permeate", 1000.0},
        {"stabilization_lime", "5.15", "Stabilization - lime-CO2", 0.6040, 0.5993, "capacity", 1000.0},
        {"disinfection", "5.16", "Disinfection - sodium hypochlorite", 0.01355, 0.7804, "capacity", 1000.0},
        {"other_direct_upper", "5.17", "Other direct non-energy costs - upper", 0.3652, 0.7517, "permeate", 1000.0},
        {"other_direct_lower", "5.17", "Other direct non-energy costs - lower", 0.0329, 0.7819, "permeate", 1000.0},
        {"indirect_upper", "5.18", "Indirect O&M - upper", 0.3777, 0.7491, "permeate", 1000.0},
        {"indirect_lower", "5.18", "Indirect O&M - lower", 0.1685, 0.7373, "permeate", 1000.0},
        {"stabilization_lime_alt", "5.15", "Stabilization - lime-CO2 (alt)", 0.3411, 0.5996, "capacity", 1000.0},
    };
    return c;
  }();
  return curves;
}

SwroCurves swro_curves_from_json(const json& doc) {
  if (doc.value("schema", std::string()) != kCurveSchema) {
    throw std::runtime_error("cost curve file: expected schema \"" + std::string(kCurveSchema) +
                             "\"");
  }
  SwroCurves c;
  c.price_year = doc.at("price_year").get<int>();
  if (c.price_year != 2018) {
    throw std::runtime_error("cost curve file: only 2018 price year tables are supported");
  }
  auto read = [](const json& arr) {
    std::vector<CostCurve> out;
    for (const auto& e : arr) {
      CostCurve cc{e.at("id").get<std::string>(),  e.value("figure", std::string()),
                   e.value("name", std::string()), e.at("A").get<double>(),
                   e.at("B").get<double>(),        e.at("x").get<std::string>(),
                   e.at("y_scale").get<double>()};
      if (!(cc.A > 0.0) || !(cc.B > 0.0)) {
        throw std::runtime_error("cost curve '" + cc.id + "': coefficients must be positive");
      }
      out.push_back(std::move(cc));
    }
    return out;
  };
  c.capex = read(doc.at("capex"));
  c.opex = read(doc.at("opex"));
  return c;
}

json swro_curves_to_json(const SwroCurves& c) {
  auto write = [](const std::vector<CostCurve>& v) {
    json arr = json::array();
    for (const auto& cc : v) {
      arr.push_back({{"id", cc.id},
                     {"figure", cc.figure},
                     {"name", cc.name},
                     {"A", cc.A},
                     {"B", cc.B},
                     {"x", cc.x_variable},
                     {"y_scale", cc.y_scale}});
    }
    return arr;
  };
  return json{{"schema", kCurveSchema},
              {"price_year", c.price_year},
              {"capex", write(c.capex)},
              {"opex", write(c.opex)}};
}

SwroCurves load_swro_curves(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cost curve file '" + path.string() + "'");
  return swro_curves_from_json(json::parse(in));
}

double tds_weight(double feed_tds) { return (feed_tds - 35000.0) / 11000.0; }

SwroCost swro_cost(const DesalPlant& plant, const PlantFlows& avg, const ParameterSet& p,
                   const SwroCurves& curves) {
  const double cap_perm = plant.Qpmax * kSecondsPerDay;
  const double cap_feed = cap_perm / plant.eta_RO;
  if (!(cap_perm > 0.0)) throw std::invalid_argument("plant capacity must be positive");

  const double alpha = tds_weight(p.swro.feed_tds);
  const double infl = p.econ.inflation;
  const double pipe = p.general.distance_to_shore;
  const std::string screen = "screen_" + std::string(to_string(p.econ.intake));
  const bool lime = p.econ.stabilization == Stabilization::lime;

  SwroCost out;
  auto add = [&](std::map<std::string, Usd2025>& items, const std::string& key, Usd2018 v) {
    items[key] = inflate<2025>(v, infl);
  };
  auto mean2 = [](Usd2018 a, Usd2018 b) { return 0.5 * (a + b); };
  auto tds = [alpha](Usd2018 lo, Usd2018 hi) { return (1.0 - alpha) * lo + alpha * hi; };
  auto at = [](const CostCurve& c, double x) { return x > 0.0 ? c(x) : Usd2018{0.0}; };

  const auto& C = curves;
  add(out.capex_items, "intake_pipe", pipe * C.capex_curve("hdpe_intake")(cap_feed));
  add(out.capex_items, "intake_screen", C.capex_curve(screen)(cap_feed));
  add(out.capex_items, "pretreatment", mean2(C.capex_curve("pretreatment_upper")(cap_feed),
                                             C.capex_curve("pretreatment_lower")(cap_feed)));
  add(out.capex_items, "swro_system", tds(C.capex_curve("swro_tds35000")(cap_perm),
                                          C.capex_curve("swro_tds46000")(cap_perm)));
  add(out.capex_items, "stabilization",
      C.capex_curve(lime ? "stabilization_lime" : "stabilization_calcite")(cap_perm));
  add(out.capex_items, "disinfection", C.capex_curve("disinfection")(cap_perm));

  add(out.opex_items, "intake_pipe", pipe * at(C.opex_curve("hdpe_intake"), avg.intake));
  add(out.opex_items, "intake_screen", at(C.opex_curve(screen), avg.intake));
  add(out.opex_items, "pretreatment",
      mean2(at(C.opex_curve("pretreatment_upper"), avg.membrane_feed),
            at(C.opex_curve("pretreatment_lower"), avg.membrane_feed)));
  add(out.opex_items, "swro_system", tds(at(C.opex_curve("swro_tds35000"), avg.permeate),
                                         at(C.opex_curve("swro_tds46000"), avg.permeate)));
  add(out.opex_items, "stabilization",
      C.opex_curve(lime ? "stabilization_lime" : "stabilization_lime_alt")(cap_perm));
  add(out.opex_items, "disinfection", C.opex_curve("disinfection")(cap_perm));
  add(out.opex_items, "other_direct",
      mean2(at(C.opex_curve("other_direct_upper"), avg.permeate),
            at(C.opex_curve("other_direct_lower"), avg.permeate)));
  add(out.opex_items, "indirect", mean2(at(C.opex_curve("indirect_upper"), avg.permeate),
                                        at(C.opex_curve("indirect_lower"), avg.permeate)));

  for (const auto& [_, v] : out.capex_items) out.total.capex += v;
  for (const auto& [_, v] : out.opex_items) out.total.opex += v;
  return out;
}

double lcow(const CostBreakdown& c, double awp, double fcr) {
  return levelize(fcr, c.capex().value, c.opex().value, awp);
}

double lcoke(const CapexOpex& wec, double annual_ke, double fcr) {
  return levelize(fcr, wec.capex.value, wec.opex.value, annual_ke);
}

double lcof(const CapexOpex& wec, const CapexOpex& pto, double annual_feed, double fcr) {
  return levelize(fcr, (wec.capex + pto.capex).value, (wec.opex + pto.opex).value, annual_feed);
}

}  // namespace wdds
