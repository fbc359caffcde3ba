#include "dmf/simbus.hpp"

namespace dmf {

void MessageBus::deliver(const GradientMessage& msg, const std::vector<int>& recipients,
                         bool positive_event) {
  if (recipients.empty()) return;
  const std::uint64_t count = recipients.size();
  const std::uint64_t payload =
      count * 4ULL * static_cast<std::uint64_t>(msg.grad_p.size());
  meter_.messages += count;
  meter_.bytes += payload;
  if (positive_event) {
    meter_.messages_positive += count;
    meter_.bytes_positive += payload;
  }
  auto& [msgs, bytes] = meter_.per_user[msg.origin];
  msgs += count;
  bytes += payload;

  if (observer_) observer_(msg, recipients);

  for (int recipient : recipients)
    apply_neighbor_update((*states_)[recipient], msg, theta_, scale_);
}

nlohmann::json cost_report(const CostMeter& meter) {
  nlohmann::json j;
  j["messages"] = meter.messages;
  j["bytes_total"] = meter.bytes;
  j["messages_positive_only"] = meter.messages_positive;
  j["bytes_positive_only"] = meter.bytes_positive;
  nlohmann::json per_user = nlohmann::json::array();
  for (const auto& [user, mb] : meter.per_user)
    per_user.push_back({{"user", user}, {"messages", mb.first}, {"bytes", mb.second}});
  j["per_user"] = std::move(per_user);
  return j;
}

}  // namespace dmf
