#ifndef DMF_SYNTH_HPP
#define DMF_SYNTH_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dmf/dataio.hpp"

namespace dmf {

// Synthetic check-in corpus: C cities of U users and V items each, with G
// latent preference groups per city. A user checks in to an item of its own
// group with probability p_in and to other same-city items with p_out.
struct SynthConfig {
  int cities = 2;
  int users_per_city = 100;
  int items_per_city = 50;
  int groups = 2;
  double p_in = 0.3;
  double p_out = 0.02;
  std::uint64_t seed = 42;
};

std::vector<CheckinRecord> generate_synthetic(const SynthConfig& cfg);

void write_checkins_csv(std::ostream& out, const std::vector<CheckinRecord>& records);

}  // namespace dmf

#endif
