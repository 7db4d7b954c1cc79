#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wdds/desal.hpp"
#include "wdds/geometry.hpp"

namespace wdds {

/// US dollars of a given price year. Amounts of different years do not mix;
/// the only bridge is `inflate`.
template <int Year>
struct Usd {
  double value = 0.0;

  constexpr Usd& operator+=(Usd o) {
    value += o.value;
    return *this;
  }
  friend constexpr Usd operator+(Usd a, Usd b) { return Usd{a.value + b.value}; }
  friend constexpr Usd operator*(double k, Usd a) { return Usd{k * a.value}; }
  friend constexpr Usd operator*(Usd a, double k) { return Usd{k * a.value}; }
  friend constexpr auto operator<=>(Usd, Usd) = default;
};

using Usd2018 = Usd<2018>;
using Usd2025 = Usd<2025>;

template <int To, int From>
[[nodiscard]] constexpr Usd<To> inflate(Usd<From> amount, double factor) {
  static_assert(To > From, "inflation only moves forward in time");
  return Usd<To>{amount.value * factor};
}

inline constexpr double kInfeasibleCost = std::numeric_limits<double>::infinity();

class InfeasibleCost : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CapexOpex {
  Usd2025 capex;  // $
  Usd2025 opex;   // $/yr
};

/// Reference-scaled float cost: C1 r + max(0, C2 (1 + log10 r)), r = A_x/A_ref.
struct WecCostCoefficients {
  double A_ref;
  double capex_c1, capex_c2;
  double opex_c1, opex_c2;
};
[[nodiscard]] WecCostCoefficients wec_cost_coefficients(const ParameterSet& p);
[[nodiscard]] CapexOpex wec_cost(double wetted_area, const ParameterSet& p);
[[nodiscard]] CapexOpex wec_cost(const WecGeometry& g, const ParameterSet& p);

[[nodiscard]] Usd2025 accumulator_cost(double Vacc, const ParameterSet& p);

struct CylinderSizing {
  double radius = 0;       // bore radius, m
  double wall = 0;         // m
  double cap = 0;          // end cap and piston head thickness, m
  double rod_diameter = 0; // m
  double length = 0;       // barrel and rod length, m
  double V_cylinder = 0, V_cap = 0, V_piston = 0, V_rod = 0;  // m^3
  double V_total = 0;      // m^3
  Usd2025 cost;
};

/// Steel take-off for a double-acting cylinder sized to pressure-vessel
/// rules; throws InfeasibleCost when P exceeds the allowable stress.
[[nodiscard]] CylinderSizing cylinder_cost(double Ap, double stroke_req, double P_design,
                                           const ParameterSet& p);

/// Y = A X^B with Y in 2018 dollars after `y_scale`.
struct CostCurve {
  std::string id;
  std::string figure;
  std::string name;
  double A = 0;
  double B = 0;
  std::string x_variable;
  double y_scale = 1000.0;  // $K -> $

  [[nodiscard]] Usd2018 operator()(double x) const;
};

struct SwroCurves {
  int price_year = 2018;
  std::vector<CostCurve> capex;
  std::vector<CostCurve> opex;

  [[nodiscard]] const CostCurve& capex_curve(const std::string& id) const;
  [[nodiscard]] const CostCurve& opex_curve(const std::string& id) const;
};

[[nodiscard]] const SwroCurves& default_swro_curves();
[[nodiscard]] SwroCurves swro_curves_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json swro_curves_to_json(const SwroCurves& c);
[[nodiscard]] SwroCurves load_swro_curves(const std::filesystem::path& path);

/// Mean flows over the accounted window, m^3/day.
struct PlantFlows {
  double intake = 0;
  double membrane_feed = 0;
  double permeate = 0;
};

struct SwroCost {
  CapexOpex total;
  std::map<std::string, Usd2025> capex_items;
  std::map<std::string, Usd2025> opex_items;
};

/// TDS weight between the 35,000 and 46,000 mg/L curves.
[[nodiscard]] double tds_weight(double feed_tds);

[[nodiscard]] SwroCost swro_cost(const DesalPlant& plant, const PlantFlows& avg,
                                 const ParameterSet& p,
                                 const SwroCurves& curves = default_swro_curves());

struct CostBreakdown {
  Usd2025 capex_wec, capex_pto, capex_swro;
  Usd2025 opex_wec, opex_pto, opex_swro;

  [[nodiscard]] Usd2025 capex() const { return capex_wec + capex_pto + capex_swro; }
  [[nodiscard]] Usd2025 opex() const { return opex_wec + opex_pto + opex_swro; }
};

/// (FCR CAPEX + OPEX) / AWP; kInfeasibleCost when AWP <= 0.
[[nodiscard]] double lcow(const CostBreakdown& c, double awp, double fcr);
/// WEC costs over annual kinetic energy (kWh/yr).
[[nodiscard]] double lcoke(const CapexOpex& wec, double annual_ke, double fcr);
/// WEC + PTO costs over annual feed volume (m^3/yr).
[[nodiscard]] double lcof(const CapexOpex& wec, const CapexOpex& pto, double annual_feed,
                          double fcr);

}  // namespace wdds
