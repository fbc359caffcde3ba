#include "dmf/baselines.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "dmf/errors.hpp"
#include "dmf/rng.hpp"

namespace dmf {

namespace {

constexpr std::uint64_t kInitStream = 0xB0A710AD00000001ULL;
constexpr std::uint64_t kLoopStream = 0xB0A710AD00000002ULL;

CentralModel init_model(const Dataset& dataset, const CentralHyper& hp) {
  CentralModel model;
  model.I = dataset.user_count();
  model.J = dataset.item_count();
  model.K = hp.K;
  model.U.resize(static_cast<std::size_t>(model.I) * hp.K);
  model.V.resize(static_cast<std::size_t>(model.J) * hp.K);
  const double scale = 1.0 / std::sqrt(static_cast<double>(hp.K));
  Rng rng(derive_seed(hp.seed, kInitStream));
  for (double& x : model.U) x = rng.uniform() * scale;
  for (double& x : model.V) x = rng.uniform() * scale;
  return model;
}

void check_finite(const double* v, int n, const char* where) {
  for (int k = 0; k < n; ++k)
    if (!std::isfinite(v[k])) throw NonFiniteUpdate(std::string(where) + " diverged");
}

std::vector<std::unordered_set<int>> rated_sets(const Dataset& dataset) {
  std::vector<std::unordered_set<int>> rated(dataset.user_count());
  for (const Rating& r : dataset.train) rated[r.user].insert(r.item);
  return rated;
}

}  // namespace

CentralModel mf_train(const Dataset& dataset, const CentralHyper& hp,
                      CentralEpochHook epoch_hook) {
  CentralModel model = init_model(dataset, hp);
  auto rated = rated_sets(dataset);
  Rng rng(derive_seed(hp.seed, kLoopStream));

  auto sgd_step = [&](int i, int j, double r, double confidence) {
    double* u = model.U.data() + static_cast<std::size_t>(i) * hp.K;
    double* v = model.V.data() + static_cast<std::size_t>(j) * hp.K;
    const double e = confidence * (r - model.score(i, j));
    for (int k = 0; k < hp.K; ++k) {
      const double uk = u[k];
      u[k] -= hp.theta * (-e * v[k] + hp.lambda * uk);
      v[k] -= hp.theta * (-e * uk + hp.lambda * v[k]);
    }
    check_finite(u, hp.K, "mf update (u)");
    check_finite(v, hp.K, "mf update (v)");
  };

  std::vector<std::size_t> order(dataset.train.size());
  for (int t = 0; t < hp.T; ++t) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const Rating& event = dataset.train[idx];
      sgd_step(event.user, event.item, event.rating, event.confidence);
      if (hp.m > 0) {
        auto negatives = sample_negatives(event.user, hp.m, rated[event.user],
                                          dataset.item_count(), rng);
        for (const NegativeSample& neg : negatives)
          sgd_step(event.user, neg.item, neg.rating, neg.confidence);
      }
    }
    if (epoch_hook) epoch_hook(t + 1, model);
  }
  return model;
}

CentralModel bpr_train(const Dataset& dataset, const CentralHyper& hp,
                       CentralEpochHook epoch_hook) {
  CentralModel model = init_model(dataset, hp);
  auto rated = rated_sets(dataset);
  Rng rng(derive_seed(hp.seed, kLoopStream));

  std::vector<std::size_t> order(dataset.train.size());
  for (int t = 0; t < hp.T; ++t) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const Rating& event = dataset.train[idx];
      auto neg = sample_negatives(event.user, 1, rated[event.user],
                                  dataset.item_count(), rng);
      if (neg.empty()) continue;  // user rated everything
      const int i = event.user, jp = event.item, jn = neg[0].item;
      double* u = model.U.data() + static_cast<std::size_t>(i) * hp.K;
      double* vp = model.V.data() + static_cast<std::size_t>(jp) * hp.K;
      double* vn = model.V.data() + static_cast<std::size_t>(jn) * hp.K;
      const double x = model.score(i, jp) - model.score(i, jn);
      const double sig = 1.0 / (1.0 + std::exp(x));
      for (int k = 0; k < hp.K; ++k) {
        const double uk = u[k];
        u[k] += hp.theta * (sig * (vp[k] - vn[k]) - hp.lambda * uk);
        vp[k] += hp.theta * (sig * uk - hp.lambda * vp[k]);
        vn[k] += hp.theta * (-sig * uk - hp.lambda * vn[k]);
      }
      check_finite(u, hp.K, "bpr update (u)");
      check_finite(vp, hp.K, "bpr update (v+)");
      check_finite(vn, hp.K, "bpr update (v-)");
    }
    if (epoch_hook) epoch_hook(t + 1, model);
  }
  return model;
}

nlohmann::json CentralHyper::to_json() const {
  return {{"K", K},     {"theta", theta}, {"lambda", lambda},
          {"T", T},     {"m", m},         {"seed", seed}};
}

CentralHyper CentralHyper::from_json(const nlohmann::json& j) {
  CentralHyper hp;
  hp.K = j.at("K").get<int>();
  hp.theta = j.at("theta").get<double>();
  hp.lambda = j.at("lambda").get<double>();
  hp.T = j.at("T").get<int>();
  hp.m = j.at("m").get<int>();
  hp.seed = j.at("seed").get<std::uint64_t>();
  return hp;
}

nlohmann::json CentralModel::to_json() const {
  return {{"I", I}, {"J", J}, {"K", K}, {"U", U}, {"V", V}};
}

CentralModel CentralModel::from_json(const nlohmann::json& j) {
  CentralModel m;
  m.I = j.at("I").get<int>();
  m.J = j.at("J").get<int>();
  m.K = j.at("K").get<int>();
  m.U = j.at("U").get<std::vector<double>>();
  m.V = j.at("V").get<std::vector<double>>();
  return m;
}

}  // namespace dmf
