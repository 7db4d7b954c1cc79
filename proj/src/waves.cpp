#include "wdds/waves.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

namespace wdds {
namespace {

constexpr double pi = std::numbers::pi;

void warn_verbatim_once() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    std::cerr << "wdds: warning: verbatim spectrum normalisation carries 2*pi times the "
                 "standard variance\n";
  });
}

// Portable uniform on [0, 1): the top 53 bits of one engine draw.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t sample_count(double duration, double dt) {
  return static_cast<std::size_t>(std::llround(duration / dt)) + 1;
}

// Sum of mag_i cos(w_i t + phase_i) on a uniform grid by rotating each
// component's phasor one sample at a time.
std::vector<double> phasor_sum(const WaveRealization& r, const std::vector<double>& mag,
                               const std::vector<double>& phase, double sample_dt) {
  const std::size_t m = r.freqs.size();
  std::vector<std::complex<double>> z(m), rot(m);
  for (std::size_t i = 0; i < m; ++i) {
    z[i] = std::polar(mag[i], phase[i]);
    rot[i] = std::polar(1.0, r.freqs[i] * sample_dt);
  }
  const std::size_t n = sample_count(r.duration, sample_dt);
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      acc += z[i].real();
      z[i] *= rot[i];
    }
    out[k] = ramp_factor(static_cast<double>(k) * sample_dt, r.ramp_time) * acc;
  }
  return out;
}

}  // namespace

std::string_view to_string(SpectrumMode m) {
  return m == SpectrumMode::verbatim ? "verbatim" : "standard";
}

SpectrumMode parse_spectrum_mode(std::string_view s) {
  if (s == "standard") return SpectrumMode::standard;
  if (s == "verbatim") return SpectrumMode::verbatim;
  throw ConfigError("unknown spectrum mode '" + std::string(s) + "'");
}

double pm_spectrum(const SeaState& s, double omega, SpectrumMode mode) {
  if (omega <= 0.0) return 0.0;
  if (mode == SpectrumMode::verbatim) warn_verbatim_once();
  const double tp4 = std::pow(s.Tp, 4);
  const double w4 = std::pow(omega, 4);
  const double v = 10.0 * std::pow(pi, 5) * s.Hs * s.Hs / (tp4 * w4 * omega) *
                   std::exp(-20.0 * std::pow(pi, 4) / (tp4 * w4));
  return mode == SpectrumMode::verbatim ? v : v / (2.0 * pi);
}

double pm_m0(const SeaState& s, SpectrumMode mode) {
  const double m0 = pi * s.Hs * s.Hs / 8.0;
  return mode == SpectrumMode::verbatim ? m0 : m0 / (2.0 * pi);
}

WaveRealization synthesize(const SeaState& s, int n_components, double duration, double dt,
                           std::uint64_t seed, double ramp_time, SpectrumMode mode) {
  WaveRealization r;
  r.dt = dt;
  r.duration = duration;
  r.ramp_time = ramp_time;
  r.seed = seed;
  const auto n = static_cast<std::size_t>(std::max(n_components, 2));
  const double dw = (kSynthOmegaMax - kSynthOmegaMin) / static_cast<double>(n);
  std::mt19937_64 rng(seed);
  r.freqs.resize(n);
  r.amplitudes.resize(n);
  r.phases.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = kSynthOmegaMin + (static_cast<double>(i) + 0.5) * dw;
    r.freqs[i] = w;
    r.amplitudes[i] = std::sqrt(2.0 * pm_spectrum(s, w, mode) * dw);
    r.phases[i] = 2.0 * pi * uniform01(rng);
  }
  return r;
}

WaveRealization regular_wave(double omega, double amplitude, double duration, double dt,
                             double ramp_time) {
  WaveRealization r;
  r.freqs = {omega};
  r.amplitudes = {amplitude};
  r.phases = {0.0};
  r.dt = dt;
  r.duration = duration;
  r.ramp_time = ramp_time;
  return r;
}

double ramp_factor(double t, double ramp_time) {
  if (ramp_time <= 0.0 || t >= ramp_time) return 1.0;
  if (t <= 0.0) return 0.0;
  return 0.5 * (1.0 - std::cos(pi * t / ramp_time));
}

std::vector<double> elevation_series(const WaveRealization& r, double sample_dt) {
  std::vector<double> phase(r.phases);
  return phasor_sum(r, r.amplitudes, phase, sample_dt);
}

std::vector<double> excitation_series(const WaveRealization& r, const HydroCoefficients& c,
                                      double sample_dt) {
  const std::size_t m = r.freqs.size();
  std::vector<double> mag(m), phase(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto v = interpolate(c, r.freqs[i]);
    mag[i] = v.exc_mag * r.amplitudes[i];
    phase[i] = r.phases[i] + v.exc_phase;
  }
  return phasor_sum(r, mag, phase, sample_dt);
}

}  // namespace wdds
