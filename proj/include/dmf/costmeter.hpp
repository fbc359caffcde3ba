#ifndef DMF_COSTMETER_HPP
#define DMF_COSTMETER_HPP

#include <cstdint>
#include <map>
#include <utility>

#include <json.hpp>

namespace dmf {

// Payload accounting: one gradient is K 4-byte floats on the wire, headers
// excluded.
struct CostMeter {
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
  // Totals restricted to positive (observed) rating events; training also
  // disseminates gradients of sampled negatives.
  std::uint64_t messages_positive = 0;
  std::uint64_t bytes_positive = 0;
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> per_user;  // origin -> (msgs, bytes)
};

nlohmann::json cost_report(const CostMeter& meter);

}  // namespace dmf

#endif
