#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wdds/waves.hpp"

namespace wdds {

struct Observation {
  std::string timestamp;  // YYYY-MM-DDThh:mm
  double Hs = 0;          // m
  double Tp = 0;          // s
  std::string station;
};

/// Why rows of a buoy file did not become observations.
struct ParseLedger {
  std::size_t data_rows = 0;
  std::size_t kept = 0;
  std::size_t sentinel = 0;     // 99 / 999 / 9999 markers
  std::size_t missing = 0;      // short rows, "MM" or non-numeric fields
  std::size_t nonpositive = 0;  // finite but <= 0
};

struct ParsedBuoy {
  std::vector<Observation> observations;
  ParseLedger ledger;
};

class NdbcFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Standard meteorological text (realtime or historical layout). WVHT becomes
/// Hs and DPD becomes Tp. Throws NdbcFormatError naming the first line when no
/// header with both columns precedes the data.
[[nodiscard]] ParsedBuoy parse_ndbc(std::string_view text, const std::string& station = "");

struct SeaPoint {
  double Tp = 0;  // s
  double Hs = 0;  // m

  friend auto operator<=>(const SeaPoint&, const SeaPoint&) = default;
};

struct ClusterSet {
  std::vector<SeaPoint> centers;      // sorted by (Tp, Hs)
  std::vector<std::size_t> weights;   // members per center
  std::vector<std::size_t> labels;    // center index of each input point, input order
  std::size_t k_requested = 0;
  bool collapsed = false;             // duplicates left fewer distinct seeds than k
  double inertia = 0;                 // sum of squared distances, best restart
  std::vector<double> inertia_history;  // per Lloyd iteration, best restart
  bool monotone = true;               // inertia never rose in any restart
  int iterations = 0;
};

struct KMeansOptions {
  int n_init = 10;
  int max_iter = 300;
};

/// k-means++ seeding then Lloyd iterations on raw (Tp, Hs). Points are sorted
/// before seeding so the result does not depend on input order. Throws
/// std::invalid_argument when there are fewer points than k.
[[nodiscard]] ClusterSet kmeans(std::span<const SeaPoint> points, std::size_t k,
                                std::uint64_t seed, const KMeansOptions& opt = {});

struct TwoLevelResult {
  std::map<std::string, ClusterSet> level1;
  ClusterSet level2;
  /// Distinct stations whose level-1 centers fall in each level-2 cluster.
  std::vector<std::size_t> locations;
};

/// Level 1 clusters each station separately with a seed derived from the
/// station id; level 2 clusters the pooled level-1 centers without weights.
[[nodiscard]] TwoLevelResult two_level_cluster(
    const std::map<std::string, std::vector<Observation>>& per_station, std::size_t k1,
    std::size_t k2, std::uint64_t seed, int jobs = 1);

/// Schema "wdds-seastates/1".
[[nodiscard]] nlohmann::json seastates_to_json(const TwoLevelResult& r, std::size_t k1,
                                               std::size_t k2, std::uint64_t seed);
/// Reads the sea_states array of a "wdds-seastates/1" document.
[[nodiscard]] std::vector<SeaState> seastates_from_json(const nlohmann::json& j);
[[nodiscard]] std::vector<SeaState> load_seastates(const std::filesystem::path& path);

/// Historical stdmet archive for one station-year. Returns the cached file if
/// present, otherwise downloads it with retries. Throws std::runtime_error
/// on failure or when the library was built without network support.
std::filesystem::path fetch_ndbc(const std::string& station, int year,
                                 const std::filesystem::path& cache_dir, int attempts = 3);
[[nodiscard]] bool fetch_supported();

}  // namespace wdds
