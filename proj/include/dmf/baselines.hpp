#ifndef DMF_BASELINES_HPP
#define DMF_BASELINES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "dmf/dataio.hpp"

#include <json.hpp>

namespace dmf {

struct CentralHyper {
  int K = 5;
  double theta = 0.1;
  double lambda = 0.1;
  int T = 100;
  int m = 3;
  std::uint64_t seed = 42;

  nlohmann::json to_json() const;
  static CentralHyper from_json(const nlohmann::json& j);
};

// Centralized latent factor model: a single shared V for all users.
struct CentralModel {
  int I = 0;
  int J = 0;
  int K = 0;
  std::vector<double> U;  // I*K row-major
  std::vector<double> V;  // J*K row-major

  double score(int i, int j) const {
    const double* u = U.data() + static_cast<std::size_t>(i) * K;
    const double* v = V.data() + static_cast<std::size_t>(j) * K;
    double s = 0.0;
    for (int k = 0; k < K; ++k) s += u[k] * v[k];
    return s;
  }

  nlohmann::json to_json() const;
  static CentralModel from_json(const nlohmann::json& j);
};

using CentralEpochHook = std::function<void(int epoch, const CentralModel&)>;

// Weighted least-squares MF via SGD, with the same negative-sampling scheme
// (m samples at confidence 1/m) as the decentralized trainer.
CentralModel mf_train(const Dataset& dataset, const CentralHyper& hp,
                      CentralEpochHook epoch_hook = nullptr);

// Pairwise-ranking baseline: one sampled unrated item per observed positive.
CentralModel bpr_train(const Dataset& dataset, const CentralHyper& hp,
                       CentralEpochHook epoch_hook = nullptr);

}  // namespace dmf

#endif
