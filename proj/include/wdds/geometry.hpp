#pragma once

#include <array>
#include <stdexcept>
#include <string_view>

#include "wdds/params.hpp"

namespace wdds {

/// The eight co-design variables. Qpmax is carried in m^3/day, everything
/// else is SI.
struct DesignVector {
  double w = 18.0;       // m
  double t = 2.0;        // m
  double m = 127e3;      // kg
  double l1 = 2.0;       // m
  double Ap = 0.26;      // m^2
  double Vacc = 4.0;     // m^3
  double P0 = 3e6;       // Pa
  double Qpmax = 3150.0; // m^3/day

  static constexpr std::size_t size = 8;

  [[nodiscard]] std::array<double, size> to_array() const {
    return {w, t, m, l1, Ap, Vacc, P0, Qpmax};
  }
  [[nodiscard]] static DesignVector from_array(const std::array<double, size>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
  }

  friend bool operator==(const DesignVector&, const DesignVector&) = default;
};

struct Bounds {
  double lo;
  double hi;
};

inline constexpr std::array<std::string_view, DesignVector::size> kDesignNames = {
    "w", "t", "m", "l1", "Ap", "Vacc", "P0", "Qpmax"};

inline constexpr std::array<Bounds, DesignVector::size> kDesignBounds = {{
    {4.0, 24.0},
    {0.8, 3.0},
    {50e3, 500e3},
    {0.1, 4.0},
    {0.1, 1.0},
    {0.01, 6.0},
    {3e6, 6e6},
    {1000.0, 10000.0},
}};

[[nodiscard]] inline DesignVector nominal_design() { return DesignVector{}; }

/// Starting point carried over from an earlier co-design study.
[[nodiscard]] inline DesignVector reference_initial_design() {
  return {11.3, 1.99, 396e3, 3.25, 0.859, 4.57, 5.95e6, 4882.0};
}

[[nodiscard]] bool within_bounds(const DesignVector& d);

class InfeasibleGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bottom-hinged rectangular flap. Vertical coordinates are relative to the
/// still water level (negative below); the hinge sits at z = -draft.
struct WecGeometry {
  double w = 0, t = 0, h = 0, draft = 0;
  double mass = 0;
  double submerged_volume = 0;
  double z_cg = 0;
  double z_cb = 0;
  double I_pitch = 0;
  double waterplane_moment = 0;  // w t^3 / 12
  double wetted_area = 0;        // 2(wh + wt + th)

  [[nodiscard]] double cg_lever() const { return z_cg + draft; }
  [[nodiscard]] double cb_lever() const { return z_cb + draft; }
};

/// Throws InfeasibleGeometry if the draft exceeds the water depth.
[[nodiscard]] WecGeometry build_geometry(const DesignVector& d, const ParameterSet& p);

struct HydrostaticResult {
  double K_hs;
  bool unstable;  // K_hs < 0
};

[[nodiscard]] HydrostaticResult hydrostatic_stiffness(const WecGeometry& g, double rho,
                                                      double gravity);

}  // namespace wdds
