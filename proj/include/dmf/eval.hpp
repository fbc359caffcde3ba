#ifndef DMF_EVAL_HPP
#define DMF_EVAL_HPP

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "dmf/baselines.hpp"
#include "dmf/dataio.hpp"
#include "dmf/dmfcore.hpp"

#include <json.hpp>

namespace dmf {

// Model-agnostic scoring surface so that metric code never sees model
// internals.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(int user, int item) const = 0;
  virtual int item_count() const = 0;
};

class DmfScorer : public Scorer {
 public:
  explicit DmfScorer(const std::vector<NodeState>& states) : states_(&states) {}
  double score(int user, int item) const override {
    return predict((*states_)[user], item);
  }
  int item_count() const override { return states_->empty() ? 0 : (*states_)[0].J; }

 private:
  const std::vector<NodeState>* states_;
};

class CentralScorer : public Scorer {
 public:
  explicit CentralScorer(const CentralModel& model) : model_(&model) {}
  double score(int user, int item) const override { return model_->score(user, item); }
  int item_count() const override { return model_->J; }

 private:
  const CentralModel* model_;
};

struct EvalReport {
  std::vector<int> k_values;
  std::map<int, std::pair<double, double>> per_k;  // k -> (mean P@k, mean R@k)
  int users_evaluated = 0;
  std::string model_kind;

  nlohmann::json to_json() const;
  // Flat row for sweep aggregation; `header()` gives the matching column row.
  static std::string csv_header(const std::vector<int>& k_values);
  std::string csv_row(int K, int D, double beta, double gamma) const;
};

// The k highest-scoring items outside `exclude`, descending score, ties
// broken by ascending item index.
std::vector<int> recommend_topk(const Scorer& scorer, int user, int k,
                                const std::unordered_set<int>& exclude);

std::pair<double, double> precision_recall_at_k(const std::vector<int>& recommended,
                                                const std::unordered_set<int>& test_items,
                                                int k);

// Means over users with a nonempty test set; train items are excluded from
// the candidate pool.
EvalReport evaluate(const Scorer& scorer, const Dataset& dataset,
                    const std::vector<int>& k_values = {5, 10});

}  // namespace dmf

#endif
