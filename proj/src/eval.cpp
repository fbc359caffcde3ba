#include "dmf/eval.hpp"

#include <algorithm>
#include <sstream>

#include "dmf/errors.hpp"

namespace dmf {

std::vector<int> recommend_topk(const Scorer& scorer, int user, int k,
                                const std::unordered_set<int>& exclude) {
  const int J = scorer.item_count();
  if (k < 1) throw DataError("k must be >= 1");
  if (J - static_cast<int>(exclude.size()) < k)
    throw InsufficientCandidates("only " +
                                 std::to_string(J - static_cast<int>(exclude.size())) +
                                 " candidates for k=" + std::to_string(k));

  std::vector<std::pair<double, int>> scored;
  scored.reserve(J);
  for (int j = 0; j < J; ++j) {
    if (exclude.count(j)) continue;
    scored.push_back({scorer.score(user, j), j});
  }
  auto better = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + k, scored.end(), better);

  std::vector<int> out(k);
  for (int r = 0; r < k; ++r) out[r] = scored[r].second;
  return out;
}

std::pair<double, double> precision_recall_at_k(const std::vector<int>& recommended,
                                                const std::unordered_set<int>& test_items,
                                                int k) {
  if (test_items.empty()) throw EmptyTestSet("precision/recall over an empty test set");
  int hits = 0;
  for (int j : recommended)
    if (test_items.count(j)) ++hits;
  return {static_cast<double>(hits) / k,
          static_cast<double>(hits) / static_cast<double>(test_items.size())};
}

EvalReport evaluate(const Scorer& scorer, const Dataset& dataset,
                    const std::vector<int>& k_values) {
  std::vector<std::unordered_set<int>> train_items(dataset.user_count());
  for (const Rating& r : dataset.train) train_items[r.user].insert(r.item);
  std::vector<std::unordered_set<int>> test_items(dataset.user_count());
  for (const TestRating& r : dataset.test) test_items[r.user].insert(r.item);

  EvalReport report;
  report.k_values = k_values;
  for (int k : k_values) report.per_k[k] = {0.0, 0.0};

  const int max_k = *std::max_element(k_values.begin(), k_values.end());
  int evaluated = 0;
  for (int i = 0; i < dataset.user_count(); ++i) {
    if (test_items[i].empty()) continue;
    const int candidates =
        scorer.item_count() - static_cast<int>(train_items[i].size());
    if (candidates < max_k) continue;  // not enough items left to rank
    std::vector<int> rec = recommend_topk(scorer, i, max_k, train_items[i]);
    for (int k : k_values) {
      std::vector<int> head(rec.begin(), rec.begin() + k);
      auto [p, r] = precision_recall_at_k(head, test_items[i], k);
      report.per_k[k].first += p;
      report.per_k[k].second += r;
    }
    ++evaluated;
  }
  if (evaluated == 0) throw NoTestUsers("no user has a nonempty test set");
  for (int k : k_values) {
    report.per_k[k].first /= evaluated;
    report.per_k[k].second /= evaluated;
  }
  report.users_evaluated = evaluated;
  return report;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["model_kind"] = model_kind;
  j["users_evaluated"] = users_evaluated;
  j["k_values"] = k_values;
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& [k, pr] : per_k)
    metrics.push_back({{"k", k}, {"precision", pr.first}, {"recall", pr.second}});
  j["metrics"] = std::move(metrics);
  return j;
}

std::string EvalReport::csv_header(const std::vector<int>& k_values) {
  std::ostringstream os;
  os << "model,K,D,beta,gamma";
  for (int k : k_values) os << ",P@" << k << ",R@" << k;
  os << ",users_evaluated";
  return os.str();
}

std::string EvalReport::csv_row(int K, int D, double beta, double gamma) const {
  std::ostringstream os;
  os.precision(12);
  os << model_kind << ',' << K << ',' << D << ',' << beta << ',' << gamma;
  for (int k : k_values) {
    const auto& pr = per_k.at(k);
    os << ',' << pr.first << ',' << pr.second;
  }
  os << ',' << users_evaluated;
  return os.str();
}

}  // namespace dmf
