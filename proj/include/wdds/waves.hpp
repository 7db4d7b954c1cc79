#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "wdds/hydro.hpp"

namespace wdds {

struct SeaState {
  double Hs = 2.64;  // m
  double Tp = 9.86;  // s

  friend bool operator==(const SeaState&, const SeaState&) = default;
};

/// `verbatim` reproduces the printed formula, whose variance is 2*pi times
/// Hs^2/16; `standard` divides by 2*pi so that 4 sqrt(m0) = Hs.
enum class SpectrumMode { standard, verbatim };

[[nodiscard]] std::string_view to_string(SpectrumMode m);
/// Throws ConfigError for anything but "standard" or "verbatim".
[[nodiscard]] SpectrumMode parse_spectrum_mode(std::string_view s);

[[nodiscard]] double pm_spectrum(const SeaState& s, double omega,
                                 SpectrumMode mode = SpectrumMode::standard);

/// Closed-form zeroth moment of the spectrum.
[[nodiscard]] double pm_m0(const SeaState& s, SpectrumMode mode = SpectrumMode::standard);

struct WaveRealization {
  std::vector<double> freqs;       // rad/s
  std::vector<double> amplitudes;  // m
  std::vector<double> phases;      // rad, [0, 2 pi)
  double dt = 0.1;
  double duration = 300.0;
  double ramp_time = 10.0;
  std::uint64_t seed = 0;
};

inline constexpr double kSynthOmegaMin = 0.2;
inline constexpr double kSynthOmegaMax = 3.0;

/// Equal-spacing discretisation of [0.2, 3.0] rad/s, one component per bin
/// centre, uniform phases drawn from a seeded 64-bit Mersenne twister.
[[nodiscard]] WaveRealization synthesize(const SeaState& s, int n_components,
                                         double duration, double dt, std::uint64_t seed,
                                         double ramp_time,
                                         SpectrumMode mode = SpectrumMode::standard);

/// Single-component wave a cos(omega t).
[[nodiscard]] WaveRealization regular_wave(double omega, double amplitude, double duration,
                                           double dt, double ramp_time);

/// Half-cosine ramp from 0 to 1 over ramp_time.
[[nodiscard]] double ramp_factor(double t, double ramp_time);

/// Surface elevation at the origin (ramp applied).
[[nodiscard]] std::vector<double> elevation_series(const WaveRealization& r, double sample_dt);

/// Excitation moment sampled every `sample_dt` from t = 0 through
/// r.duration inclusive, ramp applied. Throws HydroRangeError when a
/// component frequency is outside the tabulated range.
[[nodiscard]] std::vector<double> excitation_series(const WaveRealization& r,
                                                    const HydroCoefficients& c,
                                                    double sample_dt);

}  // namespace wdds
