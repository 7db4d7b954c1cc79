#include "wdds/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>

namespace wdds {
namespace {

using nlohmann::json;

// Products such as 9.1 * 8 / 9.1 land a few ulp above an integer.
int ceil_count(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

std::vector<double> kernel_samples(const std::vector<double>& omega,
                                   const std::vector<double>& B, double dt,
                                   double duration) {
  const auto n = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
  std::vector<double> K(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) * dt;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
      const double a = omega[i];
      const double b = omega[i + 1];
      if (t == 0.0) {
        acc += 0.5 * (B[i] + B[i + 1]) * (b - a);
        continue;
      }
      // Exact integral of a linear segment times cos(omega t).
      const double slope = (B[i + 1] - B[i]) / (b - a);
      acc += (B[i + 1] * std::sin(b * t) - B[i] * std::sin(a * t)) / t +
             slope * (std::cos(b * t) - std::cos(a * t)) / (t * t);
    }
    K[j] = 2.0 / std::numbers::pi * acc;
  }
  return K;
}

double trapz_weighted(const std::vector<double>& K, double dt, double omega, bool use_sin) {
  double acc = 0.0;
  const std::size_t n = K.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) * dt;
    const double wgt = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    acc += wgt * K[j] * (use_sin ? std::sin(omega * t) : std::cos(omega * t));
  }
  return acc * dt;
}

std::vector<double> read_array(const json& doc, const char* field) {
  if (!doc.contains(field) || !doc.at(field).is_array()) {
    throw HydroFormatError(std::string("field '") + field + "': missing or not an array");
  }
  std::vector<double> out;
  std::size_t row = 0;
  for (const auto& v : doc.at(field)) {
    if (!v.is_number()) {
      throw HydroFormatError(std::string("field '") + field + "' row " +
                             std::to_string(row) + ": not a number");
    }
    out.push_back(v.get<double>());
    ++row;
  }
  return out;
}

constexpr std::string_view kSchema = "wdds-hydro/1";

}  // namespace

MeshResolution mesh_resolution(double w, double t, double h) {
  return {ceil_count(t * 4.0 / 5.0), ceil_count(w * 26.0 / 30.0), ceil_count(h * 8.0 / 9.1)};
}

std::string geometry_hash(const WecGeometry& g, double depth) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : {g.w, g.t, g.h, g.draft, g.mass, depth}) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void validate_coefficients(const HydroCoefficients& c) {
  const std::size_t n = c.omega.size();
  if (n < 2) throw HydroFormatError("field 'omega': need at least 2 rows");
  auto check_len = [n](const std::vector<double>& v, const char* name) {
    if (v.size() != n) {
      throw HydroFormatError(std::string("field '") + name + "': length " +
                             std::to_string(v.size()) + " differs from omega length " +
                             std::to_string(n));
    }
  };
  check_len(c.added_mass, "added_mass");
  check_len(c.radiation_damping, "radiation_damping");
  check_len(c.excitation_mag, "excitation_mag");
  check_len(c.excitation_phase, "excitation_phase");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(c.omega[i] > 0.0)) {
      throw HydroFormatError("field 'omega' row " + std::to_string(i) + ": must be positive");
    }
    if (i > 0 && !(c.omega[i] > c.omega[i - 1])) {
      throw HydroFormatError("field 'omega' row " + std::to_string(i) +
                             ": frequencies must be strictly increasing");
    }
    if (!(c.radiation_damping[i] >= 0.0)) {
      throw HydroFormatError("field 'radiation_damping' row " + std::to_string(i) +
                             ": damping must be nonnegative");
    }
    if (!(c.excitation_mag[i] >= 0.0)) {
      throw HydroFormatError("field 'excitation_mag' row " + std::to_string(i) +
                             ": magnitude must be nonnegative");
    }
    if (!std::isfinite(c.added_mass[i]) || !std::isfinite(c.excitation_phase[i])) {
      throw HydroFormatError("row " + std::to_string(i) + ": non-finite value");
    }
  }
  if (!std::isfinite(c.K_hs)) throw HydroFormatError("field 'K_hs': non-finite value");
}

HydroCoefficients coefficients_from_json(const json& doc) {
  if (!doc.is_object()) throw HydroFormatError("coefficient document must be an object");
  if (doc.value("schema", std::string()) != kSchema) {
    throw HydroFormatError("field 'schema': expected \"" + std::string(kSchema) + "\"");
  }
  HydroCoefficients c;
  c.omega = read_array(doc, "omega");
  c.added_mass = read_array(doc, "added_mass");
  c.radiation_damping = read_array(doc, "radiation_damping");
  c.excitation_mag = read_array(doc, "excitation_mag");
  c.excitation_phase = read_array(doc, "excitation_phase");
  if (!doc.contains("K_hs") || !doc.at("K_hs").is_number()) {
    throw HydroFormatError("field 'K_hs': missing or not a number");
  }
  c.K_hs = doc.at("K_hs").get<double>();
  c.surrogate = doc.value("surrogate", false);
  c.geometry_hash = doc.value("geometry_hash", std::string());
  validate_coefficients(c);
  return c;
}

json coefficients_to_json(const HydroCoefficients& c) {
  return json{{"schema", kSchema},
              {"surrogate", c.surrogate},
              {"geometry_hash", c.geometry_hash},
              {"K_hs", c.K_hs},
              {"omega", c.omega},
              {"added_mass", c.added_mass},
              {"radiation_damping", c.radiation_damping},
              {"excitation_mag", c.excitation_mag},
              {"excitation_phase", c.excitation_phase}};
}

HydroCoefficients load_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw HydroFormatError("cannot open coefficient file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw HydroFormatError("coefficient file '" + path.string() + "': " + e.what());
  }
  return coefficients_from_json(doc);
}

void save_coefficients(const HydroCoefficients& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw HydroFormatError("cannot write coefficient file '" + path.string() + "'");
  out << coefficients_to_json(c).dump(2) << '\n';
}

Interpolated interpolate(const HydroCoefficients& c, double omega) {
  const auto& w = c.omega;
  const double tol = 1e-12 * w.back();
  if (omega < w.front() - tol || omega > w.back() + tol) {
    throw HydroRangeError("frequency " + std::to_string(omega) +
                          " rad/s outside tabulated range");
  }
  omega = std::clamp(omega, w.front(), w.back());
  auto it = std::upper_bound(w.begin(), w.end(), omega);
  std::size_t i = it == w.end() ? w.size() - 2
                                : static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                                      0, (it - w.begin()) - 1));
  i = std::min(i, w.size() - 2);
  const double s = (omega - w[i]) / (w[i + 1] - w[i]);
  auto lerp = [s, i](const std::vector<double>& v) { return v[i] + s * (v[i + 1] - v[i]); };
  return {lerp(c.added_mass), lerp(c.radiation_damping), lerp(c.excitation_mag),
          lerp(c.excitation_phase)};
}

double wavenumber(double omega, double depth, double gravity) {
  const double k0 = omega * omega / gravity;
  // Start from the shallow-water guess when it is larger, then Newton.
  double k = std::max(k0, omega / std::sqrt(gravity * depth));
  for (int it = 0; it < 100; ++it) {
    const double th = std::tanh(k * depth);
    const double f = gravity * k * th - omega * omega;
    const double df = gravity * th + gravity * k * depth * (1.0 - th * th);
    const double step = f / df;
    k -= step;
    if (std::abs(step) < 1e-14 * k) break;
  }
  return k;
}

HydroCoefficients flat_plate_coefficients(const WecGeometry& geom,
                                          const std::vector<double>& omega, double depth,
                                          double rho, double gravity, const KernelGrid& grid) {
  const double w = geom.w;
  const double d = geom.draft;
  const double h = depth;
  const std::size_t n = omega.size();

  HydroCoefficients c;
  c.omega = omega;
  c.added_mass.resize(n);
  c.radiation_damping.resize(n);
  c.excitation_mag.resize(n);
  c.excitation_phase.assign(n, std::numbers::pi / 2.0);
  c.K_hs = hydrostatic_stiffness(geom, rho, gravity).K_hs;
  c.surrogate = true;
  c.geometry_hash = geometry_hash(geom, depth);

  for (std::size_t i = 0; i < n; ++i) {
    const double om = omega[i];
    const double k = wavenumber(om, h, gravity);
    const double kh = k * h;
    const double cg = (om / k) * 0.5 * (1.0 + 2.0 * kh / std::sinh(2.0 * kh));
    // Pitch moment of the progressive-mode pressure over the wetted span,
    // lever measured from the hinge.
    const double I1 = d * std::sinh(kh) / k -
                      (std::cosh(kh) - std::cosh(k * (h - d))) / (k * k);
    const double x2d = 2.0 * rho * gravity * I1 / std::cosh(kh);
    // Finite-width reduction: a narrow, thin flap diffracts little.
    const double q = k * (std::numbers::pi * w / 8.0 + geom.t / 2.0);
    const double kappa = q / std::sqrt(1.0 + q * q);
    const double fe = kappa * w * x2d;
    const double capture = rho * gravity * cg * (8.0 / k + 2.0 * w);
    c.excitation_mag[i] = fe;
    c.radiation_damping[i] = fe * fe / capture;
  }

  // High-frequency added mass: small-width strip limit blended with the 2-D
  // evanescent-mode sum.
  const double a_small = rho * std::numbers::pi * w * w * d * d * d / 12.0;
  double a2d = 0.0;
  for (int m = 1; m <= 400; ++m) {
    const double km = (m - 0.5) * std::numbers::pi / h;
    const double J = d * std::sin(km * h) / km +
                     (std::cos(km * h) - std::cos(km * (h - d))) / (km * km);
    a2d += J * J / (km * h / 2.0);
  }
  a2d *= 2.0 * rho;
  double a_inf = 0.0;
  if (a_small > 0.0) {
    const double r = a_small / (w * a2d);
    a_inf = a_small / std::sqrt(1.0 + r * r);
  }

  const auto K = kernel_samples(omega, c.radiation_damping, grid.dt, grid.duration);
  for (std::size_t i = 0; i < n; ++i) {
    c.added_mass[i] = a_inf - trapz_weighted(K, grid.dt, omega[i], true) / omega[i];
  }
  return c;
}

RadiationKernel radiation_irf(const HydroCoefficients& c, double dt, double duration) {
  RadiationKernel k;
  k.dt = dt;
  k.K = kernel_samples(c.omega, c.radiation_damping, dt, duration);
  const double wN = c.omega.back();
  k.A_inf = c.added_mass.back() + trapz_weighted(k.K, dt, wN, true) / wN;
  double peak = 0.0;
  for (double v : k.K) peak = std::max(peak, std::abs(v));
  k.decay_ok = peak == 0.0 || std::abs(k.K.back()) < 0.05 * peak;
  return k;
}

double kernel_added_mass(const RadiationKernel& k, double omega) {
  return k.A_inf - trapz_weighted(k.K, k.dt, omega, true) / omega;
}

double kernel_damping(const RadiationKernel& k, double omega) {
  return trapz_weighted(k.K, k.dt, omega, false);
}

}  // namespace wdds
