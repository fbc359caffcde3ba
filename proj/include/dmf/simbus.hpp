#ifndef DMF_SIMBUS_HPP
#define DMF_SIMBUS_HPP

#include <cstdint>
#include <vector>

#include "dmf/costmeter.hpp"
#include "dmf/dmfcore.hpp"

namespace dmf {

// In-process delivery of GradientMessages with exact cost metering.
// Recipients are processed in ascending user index.
class MessageBus {
 public:
  MessageBus(std::vector<NodeState>& states, double theta, WalkScale scale)
      : states_(&states), theta_(theta), scale_(scale) {}

  void deliver(const GradientMessage& msg, const std::vector<int>& recipients,
               bool positive_event);

  const CostMeter& meter() const { return meter_; }
  void set_observer(BusObserver obs) { observer_ = std::move(obs); }

 private:
  std::vector<NodeState>* states_;
  double theta_;
  WalkScale scale_;
  CostMeter meter_;
  BusObserver observer_;
};

}  // namespace dmf

#endif
