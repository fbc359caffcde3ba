#ifndef DMF_DATAIO_HPP
#define DMF_DATAIO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dmf/rng.hpp"

#include <json.hpp>

namespace dmf {

struct CheckinRecord {
  std::string user_id;
  std::string item_id;
  long count = 1;  // number of check-ins, >= 1
  double lat = 0.0;
  double lon = 0.0;
  std::string city;
  std::optional<long long> timestamp;  // unused by training
};

struct Rating {
  int user;
  int item;
  double rating;      // in [0, 1]
  double confidence;  // 1.0 for observed entries
};

struct TestRating {
  int user;
  int item;
  double rating;
};

struct Dataset {
  std::vector<std::string> user_ids;  // index -> id
  std::vector<std::string> item_ids;
  std::unordered_map<std::string, int> user_index;
  std::unordered_map<std::string, int> item_index;
  std::vector<Rating> train;
  std::vector<TestRating> test;

  int user_count() const { return static_cast<int>(user_ids.size()); }
  int item_count() const { return static_cast<int>(item_ids.size()); }

  nlohmann::json to_json() const;
  static Dataset from_json(const nlohmann::json& j);
};

struct NegativeSample {
  int item;
  double rating;      // always 0.0
  double confidence;  // always 1/m
};

enum class NormalizeMode { Binary, MinMax };

struct ParseOptions {
  bool skip_malformed = false;  // report and continue instead of aborting
};

struct ParseResult {
  std::vector<CheckinRecord> records;
  std::vector<std::string> skipped;  // "line N: reason" for each skipped row
};

ParseResult parse_checkins(std::istream& in, const ParseOptions& opts = {});

// Iteratively drops users/items whose interaction count falls outside
// [min_interactions, max_interactions] until a fixpoint is reached.
// max_interactions <= 0 means unbounded.
std::vector<CheckinRecord> filter_interactions(std::vector<CheckinRecord> records,
                                               long min_interactions,
                                               long max_interactions);

// Collapses duplicate (user, item) rows and maps counts to ratings in [0, 1].
// Result has all entries in train with confidence 1.0 and an empty test set.
Dataset normalize(const std::vector<CheckinRecord>& records, NormalizeMode mode);

// Seeded uniform permutation split: round(train_fraction * total) entries stay
// in train, the rest move to test. Throws DegenerateSplit if a side is empty.
void split(Dataset& dataset, double train_fraction, std::uint64_t seed);

// Draws min(m, J - |rated|) distinct unrated items uniformly without
// replacement; each sample carries rating 0.0 and confidence 1/m.
std::vector<NegativeSample> sample_negatives(int user, int m,
                                             const std::unordered_set<int>& rated,
                                             int item_count, Rng& rng);

}  // namespace dmf

#endif
