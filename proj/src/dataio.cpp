#include "dmf/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "dmf/errors.hpp"

namespace dmf {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_long(const std::string& s, long long& out) {
  try {
    std::size_t pos = 0;
    out = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

ParseResult parse_checkins(std::istream& in, const ParseOptions& opts) {
  std::string header_line;
  if (!std::getline(in, header_line)) throw EmptyInput("empty check-in input");
  header_line = strip_cr(header_line);

  std::vector<std::string> header = split_csv_line(header_line);
  std::unordered_map<std::string, int> col;
  for (std::size_t c = 0; c < header.size(); ++c) col[header[c]] = static_cast<int>(c);

  for (const char* name : {"user_id", "item_id", "count", "lat", "lon", "city"}) {
    if (!col.count(name))
      throw DataError(std::string("missing required column: ") + name);
  }
  const int ts_col = col.count("timestamp") ? col["timestamp"] : -1;

  ParseResult result;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;

    auto fail = [&](const std::string& why) {
      if (opts.skip_malformed) {
        result.skipped.push_back("line " + std::to_string(line_no) + ": " + why);
        return;
      }
      throw MalformedRow(line_no, why);
    };

    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size()) {
      fail("expected " + std::to_string(header.size()) + " fields, got " +
           std::to_string(f.size()));
      continue;
    }

    CheckinRecord rec;
    rec.user_id = f[col["user_id"]];
    rec.item_id = f[col["item_id"]];
    rec.city = f[col["city"]];

    long long count = 0;
    if (!parse_long(f[col["count"]], count) || count < 1) {
      fail("bad count field '" + f[col["count"]] + "'");
      continue;
    }
    rec.count = static_cast<long>(count);

    if (!parse_double(f[col["lat"]], rec.lat) || rec.lat < -90.0 || rec.lat > 90.0) {
      fail("bad lat field '" + f[col["lat"]] + "'");
      continue;
    }
    if (!parse_double(f[col["lon"]], rec.lon) || rec.lon < -180.0 || rec.lon > 180.0) {
      fail("bad lon field '" + f[col["lon"]] + "'");
      continue;
    }
    if (rec.city.empty()) {
      fail("empty city field");
      continue;
    }
    if (ts_col >= 0 && !f[ts_col].empty()) {
      long long ts = 0;
      if (!parse_long(f[ts_col], ts)) {
        fail("bad timestamp field '" + f[ts_col] + "'");
        continue;
      }
      rec.timestamp = ts;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

std::vector<CheckinRecord> filter_interactions(std::vector<CheckinRecord> records,
                                               long min_interactions,
                                               long max_interactions) {
  if (min_interactions <= 1 && max_interactions <= 0) return records;
  for (;;) {
    std::unordered_map<std::string, long> user_deg, item_deg;
    for (const auto& r : records) {
      ++user_deg[r.user_id];
      ++item_deg[r.item_id];
    }
    auto ok = [&](long deg) {
      if (deg < min_interactions) return false;
      if (max_interactions > 0 && deg > max_interactions) return false;
      return true;
    };
    std::vector<CheckinRecord> kept;
    kept.reserve(records.size());
    for (auto& r : records) {
      if (ok(user_deg[r.user_id]) && ok(item_deg[r.item_id]))
        kept.push_back(std::move(r));
    }
    if (kept.size() == records.size()) return kept;
    records = std::move(kept);
  }
}

Dataset normalize(const std::vector<CheckinRecord>& records, NormalizeMode mode) {
  if (records.empty()) throw EmptyInput("no records to normalize");

  Dataset ds;
  auto index_of = [](std::unordered_map<std::string, int>& map,
                     std::vector<std::string>& ids, const std::string& key) {
    auto it = map.find(key);
    if (it != map.end()) return it->second;
    int idx = static_cast<int>(ids.size());
    map.emplace(key, idx);
    ids.push_back(key);
    return idx;
  };

  // Collapse duplicate (i, j) rows by summing counts; entry order follows
  // first appearance so indices stay stable for a given input order.
  std::vector<std::pair<std::pair<int, int>, long>> entries;
  std::map<std::pair<int, int>, std::size_t> seen;
  for (const auto& r : records) {
    int i = index_of(ds.user_index, ds.user_ids, r.user_id);
    int j = index_of(ds.item_index, ds.item_ids, r.item_id);
    auto key = std::make_pair(i, j);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, entries.size());
      entries.push_back({key, r.count});
    } else {
      entries[it->second].second += r.count;
    }
  }

  std::vector<long> user_max(ds.user_ids.size(), 0);
  for (const auto& e : entries)
    user_max[e.first.first] = std::max(user_max[e.first.first], e.second);

  ds.train.reserve(entries.size());
  for (const auto& e : entries) {
    double r = 1.0;
    if (mode == NormalizeMode::MinMax)
      r = static_cast<double>(e.second) / static_cast<double>(user_max[e.first.first]);
    ds.train.push_back({e.first.first, e.first.second, r, 1.0});
  }
  return ds;
}

void split(Dataset& dataset, double train_fraction, std::uint64_t seed) {
  const std::size_t total = dataset.train.size();
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw DataError("train_fraction must lie in (0, 1)");
  const auto n_train =
      static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(total)));
  if (n_train == 0 || n_train == total)
    throw DegenerateSplit("split leaves an empty side (" + std::to_string(n_train) +
                          " of " + std::to_string(total) + " in train)");

  std::vector<std::size_t> perm(total);
  for (std::size_t i = 0; i < total; ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);

  std::vector<Rating> train;
  std::vector<TestRating> test;
  train.reserve(n_train);
  test.reserve(total - n_train);
  for (std::size_t k = 0; k < total; ++k) {
    const Rating& r = dataset.train[perm[k]];
    if (k < n_train)
      train.push_back(r);
    else
      test.push_back({r.user, r.item, r.rating});
  }
  dataset.train = std::move(train);
  dataset.test = std::move(test);
}

std::vector<NegativeSample> sample_negatives(int /*user*/, int m,
                                             const std::unordered_set<int>& rated,
                                             int item_count, Rng& rng) {
  std::vector<NegativeSample> out;
  if (m < 1) return out;
  std::vector<int> unrated;
  unrated.reserve(item_count);
  for (int j = 0; j < item_count; ++j)
    if (!rated.count(j)) unrated.push_back(j);

  const std::size_t take = std::min<std::size_t>(m, unrated.size());
  const double confidence = 1.0 / static_cast<double>(m);
  // Partial Fisher-Yates: the first `take` slots end up uniform without
  // replacement.
  for (std::size_t k = 0; k < take; ++k) {
    std::size_t j = k + static_cast<std::size_t>(rng.below(unrated.size() - k));
    std::swap(unrated[k], unrated[j]);
    out.push_back({unrated[k], 0.0, confidence});
  }
  return out;
}

nlohmann::json Dataset::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["users"] = user_ids;
  j["items"] = item_ids;
  nlohmann::json train_j = nlohmann::json::array();
  for (const auto& r : train)
    train_j.push_back({r.user, r.item, r.rating, r.confidence});
  nlohmann::json test_j = nlohmann::json::array();
  for (const auto& r : test) test_j.push_back({r.user, r.item, r.rating});
  j["train"] = std::move(train_j);
  j["test"] = std::move(test_j);
  return j;
}

Dataset Dataset::from_json(const nlohmann::json& j) {
  Dataset ds;
  ds.user_ids = j.at("users").get<std::vector<std::string>>();
  ds.item_ids = j.at("items").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < ds.user_ids.size(); ++i)
    ds.user_index[ds.user_ids[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < ds.item_ids.size(); ++i)
    ds.item_index[ds.item_ids[i]] = static_cast<int>(i);
  for (const auto& e : j.at("train"))
    ds.train.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>(),
                        e.at(3).get<double>()});
  for (const auto& e : j.at("test"))
    ds.test.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  return ds;
}

}  // namespace dmf
