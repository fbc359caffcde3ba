#include "dmf/dmfcore.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "dmf/errors.hpp"
#include "dmf/simbus.hpp"

namespace dmf {

namespace {

constexpr std::uint64_t kTrainLoopStream = 0xFFFFFFFF00000001ULL;

void check_finite(const double* v, int n, int user, int item, const char* where) {
  for (int k = 0; k < n; ++k) {
    if (!std::isfinite(v[k]))
      throw NonFiniteUpdate(std::string(where) + " produced non-finite entry at user " +
                            std::to_string(user) + ", item " + std::to_string(item) +
                            ", dim " + std::to_string(k));
  }
}

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

NodeState init_state(int user, int item_count, const HyperParams& hp) {
  NodeState node;
  node.user = user;
  node.J = item_count;
  node.K = hp.K;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hp.K));
  Rng rng(derive_seed(hp.seed, static_cast<std::uint64_t>(user)));
  node.u.resize(hp.K);
  node.P.resize(static_cast<std::size_t>(item_count) * hp.K);
  node.Q.resize(static_cast<std::size_t>(item_count) * hp.K);
  for (double& x : node.u) x = rng.uniform() * scale;
  for (double& x : node.P) x = rng.uniform() * scale;
  // Q is drawn regardless of freeze_q so that the RNG stream is identical
  // across the DMF/GDMF configurations, then zeroed.
  for (double& x : node.Q) x = rng.uniform() * scale;
  if (hp.freeze_q) std::fill(node.Q.begin(), node.Q.end(), 0.0);
  return node;
}

double predict(const NodeState& node, int j) {
  const double* p = node.p_row(j);
  const double* q = node.q_row(j);
  double s = 0.0;
  for (int k = 0; k < node.K; ++k) s += node.u[k] * (p[k] + q[k]);
  return s;
}

Gradients local_gradients(const NodeState& node, int j, double r, double confidence,
                          const HyperParams& hp) {
  const double* p = node.p_row(j);
  const double* q = node.q_row(j);
  const double e = confidence * (r - predict(node, j));
  Gradients g;
  g.u.resize(node.K);
  g.p.resize(node.K);
  g.q.resize(node.K);
  for (int k = 0; k < node.K; ++k) {
    const double v = p[k] + q[k];
    g.u[k] = -e * v + hp.alpha * node.u[k];
    g.p[k] = -e * node.u[k] + hp.beta * p[k];
    g.q[k] = -e * node.u[k] + hp.gamma * q[k];
  }
  return g;
}

void apply_local_update(NodeState& node, int j, const Gradients& grads, double theta,
                        bool freeze_q) {
  double* p = node.p_row(j);
  double* q = node.q_row(j);
  for (int k = 0; k < node.K; ++k) {
    node.u[k] -= theta * grads.u[k];
    p[k] -= theta * grads.p[k];
    if (!freeze_q) q[k] -= theta * grads.q[k];
  }
  check_finite(node.u.data(), node.K, node.user, j, "local update (u)");
  check_finite(p, node.K, node.user, j, "local update (P)");
  if (!freeze_q) check_finite(q, node.K, node.user, j, "local update (Q)");
}

void apply_neighbor_update(NodeState& node, const GradientMessage& msg, double theta,
                           WalkScale scale) {
  const double factor =
      scale == WalkScale::Paper ? static_cast<double>(msg.layer_size) * msg.weight
                                : msg.weight;
  double* p = node.p_row(msg.item);
  for (int k = 0; k < node.K; ++k) p[k] -= theta * factor * msg.grad_p[k];
  check_finite(p, node.K, node.user, msg.item, "neighbor update");
}

LayerCache build_layer_cache(const AdjacencyGraph& graph, int D) {
  LayerCache cache(graph.user_count());
  for (int i = 0; i < graph.user_count(); ++i) cache[i] = neighbor_layers(graph, i, D);
  return cache;
}

namespace {

// Dissemination: one message per reachable layer member, scaled by the
// layer size and the walk weight.
void disseminate(int origin, int item, const std::vector<double>& grad_p,
                 const AdjacencyGraph& graph, const WalkPolicy& policy,
                 const LayerCache& layers, MessageBus& bus, Rng& rng, bool positive) {
  if (policy.D <= 0) return;
  if (policy.mode == WalkMode::DeterministicLayers) {
    for (int d = 1; d <= policy.D; ++d) {
      const std::vector<int>& layer = layers[origin][d - 1];
      if (layer.empty()) continue;
      GradientMessage msg{origin, item, grad_p, d, 1.0, static_cast<int>(layer.size())};
      if (graph.constant_weights()) {
        bus.deliver(msg, layer, positive);
      } else {
        // Per-recipient weights differ, so each recipient gets its own message.
        for (int recipient : layer) {
          msg.weight = walk_prob(graph, origin, recipient, d);
          bus.deliver(msg, {recipient}, positive);
        }
      }
    }
  } else {
    // Sampled mode: one random-walk endpoint per step, chosen by the
    // one-step transition probabilities.
    int cur = origin;
    for (int d = 1; d <= policy.D; ++d) {
      const auto& nbrs = graph.neighbors(cur);
      if (nbrs.empty()) break;
      double total = 0.0;
      for (const auto& [n, w] : nbrs) {
        (void)n;
        total += w;
      }
      double pick = rng.uniform() * total;
      int next = nbrs.back().first;
      for (const auto& [n, w] : nbrs) {
        pick -= w;
        if (pick <= 0.0) {
          next = n;
          break;
        }
      }
      cur = next;
      if (cur == origin) continue;  // a walk may return; no self-delivery
      GradientMessage msg{origin, item, grad_p, d, 1.0,
                          static_cast<int>(layers[origin][d - 1].size())};
      bus.deliver(msg, {cur}, positive);
    }
  }
}

double objective_loss(const std::vector<NodeState>& states, const Dataset& dataset,
                      const HyperParams& hp) {
  double loss = 0.0;
  for (const Rating& r : dataset.train) {
    const double err = r.rating - predict(states[r.user], r.item);
    loss += 0.5 * r.confidence * err * err;
  }
  const double inv_users = 1.0 / static_cast<double>(states.size());
  double u_sq = 0.0, p_sq = 0.0, q_sq = 0.0;
  for (const NodeState& node : states) {
    for (double x : node.u) u_sq += x * x;
    for (double x : node.P) p_sq += x * x;
    for (double x : node.Q) q_sq += x * x;
  }
  // The global-factor regularizer is taken over the average user copy of P,
  // since every node holds its own replica of the shared factors.
  return loss + 0.5 * hp.alpha * u_sq + 0.5 * hp.beta * inv_users * p_sq +
         0.5 * hp.gamma * q_sq;
}

double test_loss(const std::vector<NodeState>& states, const Dataset& dataset) {
  double loss = 0.0;
  for (const TestRating& r : dataset.test) {
    const double err = r.rating - predict(states[r.user], r.item);
    loss += 0.5 * err * err;
  }
  return loss;
}

}  // namespace

EpochStats train_epoch(std::vector<NodeState>& states, const AdjacencyGraph& graph,
                       const WalkPolicy& policy, const Dataset& dataset,
                       const HyperParams& hp, Rng& rng, MessageBus& bus,
                       const LayerCache& layers, int epoch) {
  const std::uint64_t messages_before = bus.meter().messages;
  const std::uint64_t bytes_before = bus.meter().bytes;

  std::vector<std::unordered_set<int>> rated(states.size());
  for (const Rating& r : dataset.train) rated[r.user].insert(r.item);

  std::vector<std::size_t> order(dataset.train.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  auto process_sample = [&](int user, int item, double r, double confidence,
                            bool positive) {
    NodeState& node = states[user];
    Gradients g = local_gradients(node, item, r, confidence, hp);
    apply_local_update(node, item, g, hp.theta, hp.freeze_q);
    disseminate(user, item, g.p, graph, policy, layers, bus, rng, positive);
  };

  for (std::size_t idx : order) {
    const Rating& event = dataset.train[idx];
    process_sample(event.user, event.item, event.rating, event.confidence, true);
    if (hp.m > 0) {
      auto negatives =
          sample_negatives(event.user, hp.m, rated[event.user], dataset.item_count(), rng);
      for (const NegativeSample& neg : negatives)
        process_sample(event.user, neg.item, neg.rating, neg.confidence, false);
    }
  }

  EpochStats stats;
  stats.epoch = epoch;
  stats.train_loss = objective_loss(states, dataset, hp);
  stats.test_loss = test_loss(states, dataset);
  stats.messages = bus.meter().messages - messages_before;
  stats.bytes = bus.meter().bytes - bytes_before;
  return stats;
}

TrainResult train(const Dataset& dataset, const AdjacencyGraph& graph,
                  const WalkPolicy& policy, const HyperParams& hp, BusObserver observer,
                  EpochHook epoch_hook) {
  TrainResult result;
  result.states.reserve(dataset.user_count());
  for (int i = 0; i < dataset.user_count(); ++i)
    result.states.push_back(init_state(i, dataset.item_count(), hp));

  LayerCache layers = build_layer_cache(graph, policy.D);
  MessageBus bus(result.states, hp.theta, policy.scale);
  if (observer) bus.set_observer(std::move(observer));

  Rng rng(derive_seed(hp.seed, kTrainLoopStream));
  result.stats.reserve(hp.T);
  for (int t = 1; t <= hp.T; ++t) {
    result.stats.push_back(
        train_epoch(result.states, graph, policy, dataset, hp, rng, bus, layers, t));
    if (epoch_hook) epoch_hook(t, result.states, result.stats.back());
  }
  result.meter = bus.meter();
  return result;
}

std::string apply_model_kind(const std::string& kind, HyperParams& hp) {
  if (kind == "dmf") return "dmf";
  if (kind == "ldmf") {
    hp.D = 0;
    return "dmf";
  }
  if (kind == "gdmf") {
    hp.freeze_q = true;
    return "dmf";
  }
  throw DataError("unknown decentralized model kind: " + kind);
}

nlohmann::json HyperParams::to_json() const {
  return {{"K", K},         {"theta", theta},
          {"alpha", alpha}, {"beta", beta},
          {"gamma", gamma}, {"D", D},
          {"m", m},         {"T", T},
          {"seed", seed},   {"freeze_q", freeze_q},
          {"walk_scale", walk_scale == WalkScale::Paper ? "paper" : "normalized"}};
}

HyperParams HyperParams::from_json(const nlohmann::json& j) {
  HyperParams hp;
  hp.K = j.at("K").get<int>();
  hp.theta = j.at("theta").get<double>();
  hp.alpha = j.at("alpha").get<double>();
  hp.beta = j.at("beta").get<double>();
  hp.gamma = j.at("gamma").get<double>();
  hp.D = j.at("D").get<int>();
  hp.m = j.at("m").get<int>();
  hp.T = j.at("T").get<int>();
  hp.seed = j.at("seed").get<std::uint64_t>();
  hp.freeze_q = j.at("freeze_q").get<bool>();
  hp.walk_scale = j.at("walk_scale").get<std::string>() == "paper" ? WalkScale::Paper
                                                                   : WalkScale::Normalized;
  return hp;
}

nlohmann::json GradientMessage::to_json() const {
  return {{"origin", origin},   {"item", item},
          {"grad_p", grad_p},   {"order", order},
          {"weight", weight},   {"layer_size", layer_size}};
}

nlohmann::json states_to_json(const std::vector<NodeState>& states) {
  nlohmann::json arr = nlohmann::json::array();
  for (const NodeState& node : states)
    arr.push_back({{"user", node.user},
                   {"J", node.J},
                   {"K", node.K},
                   {"u", node.u},
                   {"P", node.P},
                   {"Q", node.Q}});
  return arr;
}

std::vector<NodeState> states_from_json(const nlohmann::json& j) {
  std::vector<NodeState> states;
  states.reserve(j.size());
  for (const auto& e : j) {
    NodeState node;
    node.user = e.at("user").get<int>();
    node.J = e.at("J").get<int>();
    node.K = e.at("K").get<int>();
    node.u = e.at("u").get<std::vector<double>>();
    node.P = e.at("P").get<std::vector<double>>();
    node.Q = e.at("Q").get<std::vector<double>>();
    states.push_back(std::move(node));
  }
  return states;
}

}  // namespace dmf
