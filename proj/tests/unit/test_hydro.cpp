#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "wdds/hydro.hpp"

using namespace wdds;

namespace {

constexpr double pi = std::numbers::pi;

HydroCoefficients flat_table(double b, double a = 1e5) {
  HydroCoefficients c;
  for (int i = 0; i < 21; ++i) {
    c.omega.push_back(0.2 + 0.14 * i);
    c.added_mass.push_back(a);
    c.radiation_damping.push_back(b);
    c.excitation_mag.push_back(1.0);
    c.excitation_phase.push_back(0.0);
  }
  c.K_hs = 1e6;
  return c;
}

HydroCoefficients nominal_surrogate(double rho = 1025.0) {
  const auto p = default_params();
  const auto g = build_geometry(nominal_design(), p);
  return flat_plate_coefficients(g, p.omega_grid(), p.general.depth, rho, p.general.gravity);
}

}  // namespace

TEST_CASE("mesh resolution follows the panel-count rule") {
  auto r = mesh_resolution(18, 2, 9.1);
  CHECK(r.n_surge == 2);
  CHECK(r.n_sway == 16);
  CHECK(r.n_heave == 8);
  r = mesh_resolution(30, 5, 9.1);
  CHECK(r.n_surge == 4);
  CHECK(r.n_sway == 26);
  CHECK(r.n_heave == 8);
  CHECK(mesh_resolution(10, 1.25, 9.1).n_surge == 1);
  CHECK(mesh_resolution(10, 1.26, 9.1).n_surge == 2);
}

TEST_CASE("coefficient files") {
  const auto dir = std::filesystem::temp_directory_path();

  SUBCASE("well-formed table loads every row") {
    auto c = flat_table(2e5);
    c.omega.pop_back();
    c.added_mass.pop_back();
    c.radiation_damping.pop_back();
    c.excitation_mag.pop_back();
    c.excitation_phase.pop_back();
    const auto path = dir / "wdds_hydro_20.json";
    save_coefficients(c, path);
    const auto back = load_coefficients(path);
    CHECK(back.size() == 20);
    CHECK(back == c);
    std::filesystem::remove(path);
  }

  SUBCASE("negative damping names its row") {
    auto doc = coefficients_to_json(flat_table(2e5));
    doc["radiation_damping"][3] = -1.0;
    try {
      (void)coefficients_from_json(doc);
      FAIL("expected HydroFormatError");
    } catch (const HydroFormatError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("radiation_damping") != std::string::npos);
      CHECK(msg.find("row 3") != std::string::npos);
    }
  }

  SUBCASE("non-monotone frequencies are rejected") {
    auto doc = coefficients_to_json(flat_table(2e5));
    doc["omega"][5] = 0.1;
    CHECK_THROWS_AS((void)coefficients_from_json(doc), HydroFormatError);
  }

  SUBCASE("length mismatch and missing fields are rejected") {
    auto doc = coefficients_to_json(flat_table(2e5));
    doc["added_mass"].erase(0);
    CHECK_THROWS_AS((void)coefficients_from_json(doc), HydroFormatError);
    doc = coefficients_to_json(flat_table(2e5));
    doc.erase("K_hs");
    CHECK_THROWS_AS((void)coefficients_from_json(doc), HydroFormatError);
  }

  SUBCASE("surrogate survives a save/load cycle bit for bit") {
    const auto c = nominal_surrogate();
    const auto path = dir / "wdds_hydro_surrogate.json";
    save_coefficients(c, path);
    CHECK(load_coefficients(path) == c);
    std::filesystem::remove(path);
  }
}

TEST_CASE("interpolation stays inside the table") {
  const auto c = nominal_surrogate();
  const auto mid = interpolate(c, 0.5 * (c.omega[3] + c.omega[4]));
  CHECK(mid.damping == doctest::Approx(0.5 * (c.radiation_damping[3] + c.radiation_damping[4])));
  CHECK(interpolate(c, c.omega.back()).added_mass == doctest::Approx(c.added_mass.back()));
  CHECK_THROWS_AS((void)interpolate(c, 0.1), HydroRangeError);
  CHECK_THROWS_AS((void)interpolate(c, 3.5), HydroRangeError);
}

TEST_CASE("finite-depth wavenumber solves the dispersion relation") {
  for (double w : {0.2, 0.64, 1.5, 3.0}) {
    const double k = wavenumber(w, 12.0, 9.81);
    CHECK(9.81 * k * std::tanh(k * 12.0) == doctest::Approx(w * w).epsilon(1e-12));
  }
}

TEST_CASE("flat-plate surrogate") {
  const auto p = default_params();

  SUBCASE("vanishing width gives vanishing coefficients") {
    auto d = nominal_design();
    d.w = 1e-9;
    const auto g = build_geometry(d, p);
    const auto c = flat_plate_coefficients(g, p.omega_grid(), 12.0, 1025.0, 9.81);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(std::abs(c.added_mass[i]) < 1e-6);
      CHECK(c.radiation_damping[i] < 1e-6);
      CHECK(c.excitation_mag[i] < 1e-3);
    }
  }

  SUBCASE("damping is nonnegative for random geometries") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      DesignVector d;
      d.w = std::uniform_real_distribution<>(4.0, 24.0)(rng);
      d.t = std::uniform_real_distribution<>(0.8, 3.0)(rng);
      d.m = std::uniform_real_distribution<>(50e3, 500e3)(rng);
      const auto c = flat_plate_coefficients(build_geometry(d, p), p.omega_grid(), 12.0,
                                             1025.0, 9.81);
      for (double b : c.radiation_damping) CHECK(b >= 0.0);
      validate_coefficients(c);
    }
  }

  SUBCASE("doubling density doubles added mass and damping") {
    const auto a = nominal_surrogate(1025.0);
    const auto b = nominal_surrogate(2050.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(b.added_mass[i] == doctest::Approx(2.0 * a.added_mass[i]).epsilon(1e-10));
      CHECK(b.radiation_damping[i] ==
            doctest::Approx(2.0 * a.radiation_damping[i]).epsilon(1e-10));
    }
  }

  SUBCASE("added mass agrees with the kernel it implies") {
    const auto c = nominal_surrogate();
    const auto k = radiation_irf(c, 0.1, 20.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(kernel_added_mass(k, c.omega[i]) ==
            doctest::Approx(c.added_mass[i]).epsilon(1e-10));
    }
    CHECK(k.decay_ok);
  }

  SUBCASE("surrogate is tagged with its geometry") {
    const auto c = nominal_surrogate();
    CHECK(c.surrogate);
    CHECK(c.geometry_hash == geometry_hash(build_geometry(nominal_design(), p), 12.0));
    auto d = nominal_design();
    d.w = 18.5;
    CHECK(c.geometry_hash != geometry_hash(build_geometry(d, p), 12.0));
  }
}

TEST_CASE("radiation impulse response") {
  SUBCASE("zero damping gives a zero kernel") {
    auto c = flat_table(0.0, 3.5e5);
    c.added_mass.back() = 4.2e5;
    const auto k = radiation_irf(c, 0.1, 20.0);
    for (double v : k.K) CHECK(v == 0.0);
    CHECK(k.A_inf == 4.2e5);
  }

  SUBCASE("constant damping gives a sine kernel") {
    const double b = 3.0e5;
    const auto c = flat_table(b);
    const auto k = radiation_irf(c, 0.1, 20.0);
    const double w0 = c.omega.front(), wN = c.omega.back();
    for (double t : {0.5, 1.3, 2.7, 6.1, 14.9}) {
      const auto j = static_cast<std::size_t>(std::llround(t / 0.1));
      const double tj = static_cast<double>(j) * 0.1;
      const double expected = 2.0 * b / pi * (std::sin(wN * tj) - std::sin(w0 * tj)) / tj;
      CHECK(k.K[j] == doctest::Approx(expected).epsilon(1e-9).scale(b));
    }
    CHECK(k.K[0] == doctest::Approx(2.0 * b / pi * (wN - w0)).epsilon(1e-12));
  }

  SUBCASE("single spike gives a cosine kernel at that frequency") {
    auto c = flat_table(0.0);
    const std::size_t i = 10;
    const double b = 1e6, h = 0.14;
    c.radiation_damping[i] = b;
    const auto k = radiation_irf(c, 0.1, 20.0);
    for (std::size_t j = 1; j < k.K.size(); j += 17) {
      const double t = static_cast<double>(j) * 0.1;
      const double sinc = std::sin(h * t / 2.0) / (h * t / 2.0);
      const double expected = 2.0 / pi * b * h * std::cos(c.omega[i] * t) * sinc * sinc;
      CHECK(k.K[j] == doctest::Approx(expected).epsilon(1e-9).scale(b * h));
    }
  }

  SUBCASE("kernel is linear in damping") {
    const auto c = nominal_surrogate();
    auto c3 = c;
    for (auto& b : c3.radiation_damping) b *= 3.0;
    const auto k1 = radiation_irf(c, 0.1, 20.0);
    const auto k3 = radiation_irf(c3, 0.1, 20.0);
    double peak = 0.0;
    for (double v : k1.K) peak = std::max(peak, std::abs(v));
    for (std::size_t j = 0; j < k1.K.size(); ++j) {
      CHECK(k3.K[j] == doctest::Approx(3.0 * k1.K[j]).scale(peak).epsilon(1e-12));
    }
  }

  SUBCASE("a kernel that has not decayed is flagged") {
    const auto k = radiation_irf(flat_table(3.0e5), 0.1, 2.0);
    CHECK_FALSE(k.decay_ok);
  }
}
