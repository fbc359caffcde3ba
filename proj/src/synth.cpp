#include "dmf/synth.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "dmf/errors.hpp"
#include "dmf/rng.hpp"

namespace dmf {

namespace {
constexpr std::uint64_t kSynthStream = 0x5E17400000000001ULL;
}

std::vector<CheckinRecord> generate_synthetic(const SynthConfig& cfg) {
  if (cfg.cities < 1 || cfg.users_per_city < 1 || cfg.items_per_city < 1 ||
      cfg.groups < 1)
    throw DataError("synthetic corpus dimensions must be positive");
  if (cfg.p_out > cfg.p_in)
    throw DataError("p_out must not exceed p_in");

  Rng rng(derive_seed(cfg.seed, kSynthStream));
  std::vector<CheckinRecord> records;

  for (int c = 0; c < cfg.cities; ++c) {
    // City centers far apart so that centroids never blur across cities.
    const double center_lat = 10.0 + 8.0 * c;
    const double center_lon = 10.0 + 12.0 * c;
    const std::string city = "C" + std::to_string(c);

    struct ItemPos {
      double lat, lon;
    };
    // Items of one preference group cluster spatially, so users who share a
    // group also end up geographically close (the location-aggregation
    // premise at district granularity).
    std::vector<ItemPos> items(cfg.items_per_city);
    for (int v = 0; v < cfg.items_per_city; ++v) {
      const double angle = 2.0 * 3.14159265358979323846 * (v % cfg.groups) / cfg.groups;
      const double along = rng.uniform(-0.4, 0.4);
      items[v].lat = center_lat + 0.3 * std::sin(angle) + along * std::cos(angle);
      items[v].lon = center_lon + 0.3 * std::cos(angle) - along * std::sin(angle);
    }

    for (int u = 0; u < cfg.users_per_city; ++u) {
      const int group = u % cfg.groups;
      const std::string user_id = city + "_u" + std::to_string(u);
      bool any = false;
      for (int v = 0; v < cfg.items_per_city; ++v) {
        const double p = (v % cfg.groups == group) ? cfg.p_in : cfg.p_out;
        if (rng.uniform() < p) {
          records.push_back({user_id, city + "_p" + std::to_string(v), 1, items[v].lat,
                             items[v].lon, city, std::nullopt});
          any = true;
        }
      }
      if (!any) {
        // Guarantee at least one check-in so every user exists in the corpus.
        const int v = group;
        records.push_back({user_id, city + "_p" + std::to_string(v), 1, items[v].lat,
                           items[v].lon, city, std::nullopt});
      }
    }
  }
  return records;
}

void write_checkins_csv(std::ostream& out, const std::vector<CheckinRecord>& records) {
  out << "user_id,item_id,count,lat,lon,city\n";
  out.precision(10);
  for (const auto& r : records)
    out << r.user_id << ',' << r.item_id << ',' << r.count << ',' << r.lat << ',' << r.lon
        << ',' << r.city << '\n';
}

}  // namespace dmf
