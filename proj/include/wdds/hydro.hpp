#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wdds/geometry.hpp"

namespace wdds {

struct MeshResolution {
  int n_surge;
  int n_sway;
  int n_heave;
};

/// Panel counts for an external BEM mesh of a w x t x h box.
[[nodiscard]] MeshResolution mesh_resolution(double w, double t, double h);

/// Frequency-domain pitch coefficients about the hinge.
struct HydroCoefficients {
  std::vector<double> omega;             // rad/s, strictly increasing
  std::vector<double> added_mass;        // kg m^2
  std::vector<double> radiation_damping; // N m s/rad
  std::vector<double> excitation_mag;    // N m / m
  std::vector<double> excitation_phase;  // rad
  double K_hs = 0.0;                     // N m/rad
  bool surrogate = false;
  std::string geometry_hash;  // empty when not tied to a geometry

  [[nodiscard]] std::size_t size() const { return omega.size(); }

  friend bool operator==(const HydroCoefficients&, const HydroCoefficients&) = default;
};

class HydroFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HydroRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hex digest of the geometry fields the coefficients depend on.
[[nodiscard]] std::string geometry_hash(const WecGeometry& g, double depth);

/// Checks array lengths, monotone frequencies and nonnegative damping.
/// Throws HydroFormatError naming the field and row.
void validate_coefficients(const HydroCoefficients& c);

[[nodiscard]] HydroCoefficients coefficients_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json coefficients_to_json(const HydroCoefficients& c);
[[nodiscard]] HydroCoefficients load_coefficients(const std::filesystem::path& path);
void save_coefficients(const HydroCoefficients& c, const std::filesystem::path& path);

/// Linear interpolation inside the tabulated range; throws HydroRangeError
/// outside it.
struct Interpolated {
  double added_mass;
  double damping;
  double exc_mag;
  double exc_phase;
};
[[nodiscard]] Interpolated interpolate(const HydroCoefficients& c, double omega);

struct KernelGrid {
  double dt = 0.1;
  double duration = 20.0;
};

/// Analytical flat-plate surrogate for a surging flap in finite depth.
/// Damping and excitation follow from a 2-D wavemaker solution with a 3-D
/// width correction; excitation is tied to damping by the Haskind relation.
/// Added mass is made consistent with the radiation kernel on `grid`.
[[nodiscard]] HydroCoefficients flat_plate_coefficients(const WecGeometry& geom,
                                                        const std::vector<double>& omega,
                                                        double depth, double rho,
                                                        double gravity,
                                                        const KernelGrid& grid = {});

/// Linear water-wave wavenumber for finite depth.
[[nodiscard]] double wavenumber(double omega, double depth, double gravity);

struct RadiationKernel {
  double dt = 0.0;
  std::vector<double> K;  // K[j] = K(j dt)
  double A_inf = 0.0;
  bool decay_ok = true;   // |K(end)| < 0.05 max|K|
};

/// Cosine transform of the tabulated damping (piecewise linear in omega,
/// integrated exactly over the tabulated range).
[[nodiscard]] RadiationKernel radiation_irf(const HydroCoefficients& c, double dt,
                                            double duration);

/// Frequency response of a truncated kernel:
/// A_eff = A_inf - (1/omega) * trapz(K sin), B_eff = trapz(K cos).
[[nodiscard]] double kernel_added_mass(const RadiationKernel& k, double omega);
[[nodiscard]] double kernel_damping(const RadiationKernel& k, double omega);

}  // namespace wdds
