#include <chrono>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "wdds/seastates.hpp"

#ifdef WDDS_WITH_FETCH
#include <httplib.h>
#endif

namespace wdds {

bool fetch_supported() {
#ifdef WDDS_WITH_FETCH
  return true;
#else
  return false;
#endif
}

std::filesystem::path fetch_ndbc(const std::string& station, int year,
                                 const std::filesystem::path& cache_dir, int attempts) {
  const std::string name = station + "h" + std::to_string(year) + ".txt";
  const auto target = cache_dir / name;
  if (std::filesystem::exists(target)) return target;
#ifdef WDDS_WITH_FETCH
  std::filesystem::create_directories(cache_dir);
  httplib::SSLClient client("www.ndbc.noaa.gov");
  client.set_follow_location(true);
  client.set_connection_timeout(20);
  client.set_read_timeout(60);
  // The text viewer serves the gzip archive already decompressed.
  const std::string path = "/view_text_file.php?filename=" + name +
                           ".gz&dir=data/historical/stdmet/";
  std::string last_error = "no attempt made";
  for (int a = 0; a < attempts; ++a) {
    if (a > 0) std::this_thread::sleep_for(std::chrono::seconds(1 << a));
    auto res = client.Get(path);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      if (res->status == 404) break;
      continue;
    }
    const auto partial = target.string() + ".part";
    {
      std::ofstream out(partial, std::ios::binary);
      out << res->body;
      if (!out) throw std::runtime_error("cannot write " + partial);
    }
    std::filesystem::rename(partial, target);
    return target;
  }
  throw std::runtime_error("fetch " + name + " failed: " + last_error);
#else
  (void)attempts;
  throw std::runtime_error("cannot fetch " + name +
                           ": built without network support (WDDS_FETCH=OFF)");
#endif
}

}  // namespace wdds
