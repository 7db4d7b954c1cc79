#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace wdds {

/// Draws are made from raw 64-bit engine output so that runs reproduce across
/// standard libraries; the std distributions are implementation-defined.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : eng_(seed) {}
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  /// Index in [0, n); the modulo bias is below 2^-50 for the sizes used here.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }
  std::uint8_t bit() { return static_cast<std::uint8_t>(eng_() >> 63); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace wdds
