#include "wdds/seastates.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <set>

#include "wdds/parallel.hpp"
#include "wdds/rng.hpp"

namespace wdds {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_number(std::string_view s, double& v) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && ptr == end && std::isfinite(v);
}

bool is_sentinel(double v) { return v == 99.0 || v == 999.0 || v == 9999.0; }

struct Header {
  std::size_t n_cols = 0;
  std::size_t wvht = 0, dpd = 0;
  bool has_minute = false;
};

std::optional<Header> read_header(std::string_view line) {
  while (!line.empty() && line.front() == '#') line.remove_prefix(1);
  const auto tok = split_ws(line);
  Header h;
  h.n_cols = tok.size();
  bool wv = false, dp = false;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    if (tok[i] == "WVHT") {
      h.wvht = i;
      wv = true;
    } else if (tok[i] == "DPD") {
      h.dpd = i;
      dp = true;
    }
  }
  if (!wv || !dp || tok.size() < 4) return std::nullopt;
  if (tok[0] != "YY" && tok[0] != "YYYY") return std::nullopt;
  h.has_minute = tok.size() > 4 && tok[4] == "mm";
  return h;
}

std::string make_timestamp(const std::vector<std::string_view>& tok, bool has_minute) {
  double y = 0, mo = 0, d = 0, hr = 0, mi = 0;
  if (!parse_number(tok[0], y) || !parse_number(tok[1], mo) || !parse_number(tok[2], d) ||
      !parse_number(tok[3], hr) || (has_minute && !parse_number(tok[4], mi))) {
    return {};
  }
  // Pre-1999 archives carry two-digit years.
  if (y < 100) y += 1900;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", static_cast<int>(y),
                static_cast<int>(mo), static_cast<int>(d), static_cast<int>(hr),
                static_cast<int>(mi));
  return buf;
}

double sq_dist(const SeaPoint& a, const SeaPoint& b) {
  const double dt = a.Tp - b.Tp, dh = a.Hs - b.Hs;
  return dt * dt + dh * dh;
}

std::size_t nearest(const SeaPoint& p, const std::vector<SeaPoint>& centers) {
  std::size_t best = 0;
  double bd = sq_dist(p, centers[0]);
  for (std::size_t c = 1; c < centers.size(); ++c) {
    const double d = sq_dist(p, centers[c]);
    if (d < bd) {
      bd = d;
      best = c;
    }
  }
  return best;
}

struct Restart {
  std::vector<SeaPoint> centers;
  std::vector<std::size_t> labels;
  std::vector<double> history;
  bool monotone = true;
  bool collapsed = false;
  int iterations = 0;
};

std::vector<SeaPoint> seed_plus_plus(const std::vector<SeaPoint>& pts, std::size_t k,
                                     PortableRng& rng, bool& collapsed) {
  std::vector<SeaPoint> centers{pts[rng.index(pts.size())]};
  std::vector<double> d2(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = sq_dist(pts[i], centers[0]);
  while (centers.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    if (total <= 0.0) {
      collapsed = true;
      break;
    }
    const double r = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = pts.size() - 1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      acc += d2[i];
      if (d2[i] > 0.0 && acc > r) {
        pick = i;
        break;
      }
    }
    // Rounding can leave r at the very end; fall back to the last positive weight.
    while (d2[pick] <= 0.0) --pick;
    centers.push_back(pts[pick]);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d2[i] = std::min(d2[i], sq_dist(pts[i], centers.back()));
    }
  }
  return centers;
}

Restart lloyd(const std::vector<SeaPoint>& pts, std::vector<SeaPoint> centers, int max_iter) {
  Restart r;
  r.labels.assign(pts.size(), std::numeric_limits<std::size_t>::max());
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto c = nearest(pts[i], centers);
      changed = changed || c != r.labels[i];
      r.labels[i] = c;
      inertia += sq_dist(pts[i], centers[c]);
    }
    // Relative slack absorbs summation-order rounding only.
    if (!r.history.empty() && inertia > r.history.back() * (1.0 + 1e-12) + 1e-300) {
      r.monotone = false;
    }
    r.history.push_back(inertia);
    r.iterations = it + 1;
    if (!changed) break;

    std::vector<SeaPoint> sum(centers.size());
    std::vector<std::size_t> count(centers.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      sum[r.labels[i]].Tp += pts[i].Tp;
      sum[r.labels[i]].Hs += pts[i].Hs;
      ++count[r.labels[i]];
    }
    // An emptied cluster keeps its previous center.
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (count[c] > 0) {
        centers[c] = {sum[c].Tp / static_cast<double>(count[c]),
                      sum[c].Hs / static_cast<double>(count[c])};
      }
    }
  }
  r.centers = std::move(centers);
  return r;
}

std::uint64_t station_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

ParsedBuoy parse_ndbc(std::string_view text, const std::string& station) {
  ParsedBuoy out;
  std::optional<Header> header;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (split_ws(line).empty()) continue;
    if (!header) {
      header = read_header(line);
      if (!header) {
        throw NdbcFormatError("line " + std::to_string(line_no) + ": unrecognized header '" +
                              std::string(line.substr(0, 80)) + "'");
      }
      continue;
    }
    if (line.front() == '#') continue;  // units row

    ++out.ledger.data_rows;
    const auto tok = split_ws(line);
    if (tok.size() < header->n_cols) {
      ++out.ledger.missing;
      continue;
    }
    double hs = 0, tp = 0;
    if (!parse_number(tok[header->wvht], hs) || !parse_number(tok[header->dpd], tp)) {
      ++out.ledger.missing;
      continue;
    }
    if (is_sentinel(hs) || is_sentinel(tp)) {
      ++out.ledger.sentinel;
      continue;
    }
    if (hs <= 0.0 || tp <= 0.0) {
      ++out.ledger.nonpositive;
      continue;
    }
    auto ts = make_timestamp(tok, header->has_minute);
    if (ts.empty()) {
      ++out.ledger.missing;
      continue;
    }
    out.observations.push_back({std::move(ts), hs, tp, station});
    ++out.ledger.kept;
  }
  return out;
}

ClusterSet kmeans(std::span<const SeaPoint> points, std::size_t k, std::uint64_t seed,
                  const KMeansOptions& opt) {
  if (k == 0) throw std::invalid_argument("kmeans: k must be positive");
  if (points.size() < k) {
    throw std::invalid_argument("kmeans: " + std::to_string(points.size()) +
                                " points cannot form " + std::to_string(k) + " clusters");
  }
  // Canonical order so the seeding does not depend on how callers listed points.
  std::vector<std::size_t> perm(points.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<SeaPoint> pts(points.size());
  for (std::size_t i = 0; i < perm.size(); ++i) pts[i] = points[perm[i]];

  PortableRng rng(seed);
  ClusterSet out;
  out.k_requested = k;
  std::optional<Restart> best;
  for (int run = 0; run < std::max(opt.n_init, 1); ++run) {
    bool collapsed = false;
    auto r = lloyd(pts, seed_plus_plus(pts, k, rng, collapsed), opt.max_iter);
    r.collapsed = collapsed;
    out.monotone = out.monotone && r.monotone;
    if (!best || r.history.back() < best->history.back()) best = std::move(r);
  }

  // Present centers in (Tp, Hs) order and relabel.
  std::vector<std::size_t> order(best->centers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return best->centers[a] < best->centers[b];
  });
  std::vector<std::size_t> relabel(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) relabel[order[i]] = i;

  out.centers.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out.centers[i] = best->centers[order[i]];
  out.weights.assign(order.size(), 0);
  out.labels.assign(points.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto c = relabel[best->labels[i]];
    out.labels[perm[i]] = c;
    ++out.weights[c];
  }
  out.collapsed = best->collapsed;
  out.inertia = best->history.back();
  out.inertia_history = best->history;
  out.iterations = best->iterations;
  return out;
}

TwoLevelResult two_level_cluster(const std::map<std::string, std::vector<Observation>>& per_station,
                                 std::size_t k1, std::size_t k2, std::uint64_t seed, int jobs) {
  if (per_station.empty()) throw std::invalid_argument("two_level_cluster: no stations");
  std::vector<std::string> ids;
  for (const auto& [id, _] : per_station) ids.push_back(id);

  std::vector<ClusterSet> level1(ids.size());
  parallel_for(ids.size(), jobs, [&](std::size_t i) {
    const auto& obs = per_station.at(ids[i]);
    std::vector<SeaPoint> pts;
    pts.reserve(obs.size());
    for (const auto& o : obs) pts.push_back({o.Tp, o.Hs});
    level1[i] = kmeans(pts, k1, seed ^ station_hash(ids[i]));
  });

  std::vector<SeaPoint> pooled;
  std::vector<std::size_t> owner;
  TwoLevelResult r;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (const auto& c : level1[i].centers) {
      pooled.push_back(c);
      owner.push_back(i);
    }
    r.level1.emplace(ids[i], std::move(level1[i]));
  }
  r.level2 = kmeans(pooled, k2, seed);

  std::vector<std::set<std::size_t>> stations(r.level2.centers.size());
  for (std::size_t i = 0; i < pooled.size(); ++i) stations[r.level2.labels[i]].insert(owner[i]);
  for (const auto& s : stations) r.locations.push_back(s.size());
  return r;
}

nlohmann::json seastates_to_json(const TwoLevelResult& r, std::size_t k1, std::size_t k2,
                                 std::uint64_t seed) {
  using nlohmann::json;
  json states = json::array();
  for (std::size_t i = 0; i < r.level2.centers.size(); ++i) {
    states.push_back({{"Tp", r.level2.centers[i].Tp},
                      {"Hs", r.level2.centers[i].Hs},
                      {"locations", r.locations[i]},
                      {"weight", r.level2.weights[i]}});
  }
  json stations = json::array();
  json level1 = json::object();
  for (const auto& [id, cs] : r.level1) {
    stations.push_back(id);
    json centers = json::array();
    for (std::size_t i = 0; i < cs.centers.size(); ++i) {
      centers.push_back({{"Tp", cs.centers[i].Tp}, {"Hs", cs.centers[i].Hs},
                         {"weight", cs.weights[i]}});
    }
    level1[id] = centers;
  }
  return {{"schema", "wdds-seastates/1"},
          {"k1", k1},
          {"k2", k2},
          {"seed", seed},
          {"stations", stations},
          {"collapsed", r.level2.collapsed},
          {"sea_states", states},
          {"level1", level1}};
}

std::vector<SeaState> seastates_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema") != "wdds-seastates/1") {
      throw ConfigError("sea states: unsupported schema");
    }
    std::vector<SeaState> out;
    std::size_t i = 0;
    for (const auto& s : j.at("sea_states")) {
      const SeaState st{s.at("Hs").get<double>(), s.at("Tp").get<double>()};
      if (!(st.Hs > 0.0) || !(st.Tp > 0.0)) {
        throw ConfigError("sea states: entry " + std::to_string(i) + " is not positive");
      }
      out.push_back(st);
      ++i;
    }
    if (out.empty()) throw ConfigError("sea states: the set is empty");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sea states: ") + e.what());
  }
}

std::vector<SeaState> load_seastates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return seastates_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace wdds
