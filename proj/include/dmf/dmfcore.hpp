#ifndef DMF_DMFCORE_HPP
#define DMF_DMFCORE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dmf/costmeter.hpp"
#include "dmf/dataio.hpp"
#include "dmf/geograph.hpp"
#include "dmf/rng.hpp"

#include <json.hpp>

namespace dmf {

class MessageBus;
struct GradientMessage;

// Called on every bus delivery, before the neighbor updates are applied.
using BusObserver =
    std::function<void(const GradientMessage&, const std::vector<int>& recipients)>;

struct HyperParams {
  int K = 5;            // latent dimension
  double theta = 0.1;   // learning rate
  double alpha = 0.1;   // user regularizer
  double beta = 0.01;   // global item regularizer
  double gamma = 0.01;  // personal item regularizer
  int D = 2;            // max walk distance
  int m = 3;            // negatives per positive
  int T = 100;          // max epochs
  std::uint64_t seed = 42;
  bool freeze_q = false;  // GDMF: no personal factors
  WalkScale walk_scale = WalkScale::Paper;

  nlohmann::json to_json() const;
  static HyperParams from_json(const nlohmann::json& j);
};

// One user's learner: own latent factor, a local copy of the global item
// factors P, and private personal item factors Q. Prediction always uses
// P_j + Q_j.
struct NodeState {
  int user = 0;
  int J = 0;
  int K = 0;
  std::vector<double> u;  // K
  std::vector<double> P;  // J*K row-major
  std::vector<double> Q;  // J*K row-major

  double* p_row(int j) { return P.data() + static_cast<std::size_t>(j) * K; }
  double* q_row(int j) { return Q.data() + static_cast<std::size_t>(j) * K; }
  const double* p_row(int j) const { return P.data() + static_cast<std::size_t>(j) * K; }
  const double* q_row(int j) const { return Q.data() + static_cast<std::size_t>(j) * K; }
};

// The only payload that ever crosses node boundaries. Carries no rating, no
// user factor, and no personal factor.
struct GradientMessage {
  int origin;
  int item;
  std::vector<double> grad_p;
  int order;       // walk distance d >= 1
  double weight;   // resolved W_{ii'}
  int layer_size;  // |N^d(origin)|

  nlohmann::json to_json() const;
};

struct EpochStats {
  int epoch;
  double train_loss;
  double test_loss;
  std::uint64_t messages;
  std::uint64_t bytes;
};

struct Gradients {
  std::vector<double> u;
  std::vector<double> p;
  std::vector<double> q;
};

NodeState init_state(int user, int item_count, const HyperParams& hp);

double predict(const NodeState& node, int j);

// e = confidence * (r - u . v_j); returns (-e v + alpha u, -e u + beta p,
// -e u + gamma q).
Gradients local_gradients(const NodeState& node, int j, double r, double confidence,
                          const HyperParams& hp);

void apply_local_update(NodeState& node, int j, const Gradients& grads, double theta,
                        bool freeze_q);

// P_j -= theta * layer_size * weight * grad_p (paper scale), or without the
// layer_size factor (normalized scale).
void apply_neighbor_update(NodeState& node, const GradientMessage& msg, double theta,
                           WalkScale scale);

// BFS layers per user up to policy D, computed once per training run.
using LayerCache = std::vector<std::vector<std::vector<int>>>;
LayerCache build_layer_cache(const AdjacencyGraph& graph, int D);

EpochStats train_epoch(std::vector<NodeState>& states, const AdjacencyGraph& graph,
                       const WalkPolicy& policy, const Dataset& dataset,
                       const HyperParams& hp, Rng& rng, MessageBus& bus,
                       const LayerCache& layers, int epoch);

struct TrainResult {
  std::vector<NodeState> states;
  std::vector<EpochStats> stats;
  CostMeter meter;
};

// Invoked after every epoch with the current states and that epoch's stats.
using EpochHook =
    std::function<void(int epoch, const std::vector<NodeState>&, const EpochStats&)>;

TrainResult train(const Dataset& dataset, const AdjacencyGraph& graph,
                  const WalkPolicy& policy, const HyperParams& hp,
                  BusObserver observer = nullptr, EpochHook epoch_hook = nullptr);

// Maps a model kind to its dmf configuration: "ldmf" forces D = 0, "gdmf"
// forces freeze_q. Returns the model family tag stored in checkpoints
// ("dmf" for all three variants). Throws DataError for central kinds.
std::string apply_model_kind(const std::string& kind, HyperParams& hp);

nlohmann::json states_to_json(const std::vector<NodeState>& states);
std::vector<NodeState> states_from_json(const nlohmann::json& j);

}  // namespace dmf

#endif
