#include "dmf/geograph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "dmf/errors.hpp"

namespace dmf {

namespace {
constexpr double kEarthRadiusKm = 6371.0;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}  // namespace

double haversine(double lat1, double lon1, double lat2, double lon2) {
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlam = (lon2 - lon1) * kDegToRad;
  const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) * std::sin(dlam / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

AdjacencyGraph::AdjacencyGraph(int user_count, int degree_cap, KernelSpec kernel,
                               std::vector<std::string> city)
    : user_count_(user_count), cap_(degree_cap), kernel_(kernel), city_(std::move(city)),
      adj_(user_count) {}

void AdjacencyGraph::add_edge(int a, int b, double w) {
  auto insert_sorted = [](std::vector<std::pair<int, double>>& v, int k, double w2) {
    auto it = std::lower_bound(v.begin(), v.end(), k,
                               [](const auto& p, int key) { return p.first < key; });
    v.insert(it, {k, w2});
  };
  insert_sorted(adj_[a], b, w);
  insert_sorted(adj_[b], a, w);
}

double AdjacencyGraph::weight(int i, int k) const {
  for (const auto& [n, w] : adj_[i])
    if (n == k) return w;
  return 0.0;
}

int AdjacencyGraph::city_size(int i) const {
  if (city_count_.empty())
    for (const auto& c : city_) ++city_count_[c];
  return city_count_.at(city_[i]);
}

std::size_t AdjacencyGraph::edge_count() const {
  std::size_t half = 0;
  for (const auto& v : adj_) half += v.size();
  return half / 2;
}

std::vector<UserLocation> derive_locations(
    const std::vector<CheckinRecord>& records,
    const std::unordered_map<std::string, int>& user_index) {
  struct CityAgg {
    long count = 0;
    double lat_sum = 0.0, lon_sum = 0.0;
    long rows = 0;
  };
  std::vector<std::map<std::string, CityAgg>> per_user(user_index.size());
  for (const auto& r : records) {
    auto it = user_index.find(r.user_id);
    if (it == user_index.end()) continue;  // user filtered out of the dataset
    CityAgg& agg = per_user[it->second][r.city];
    agg.count += r.count;
    agg.lat_sum += r.lat;
    agg.lon_sum += r.lon;
    agg.rows += 1;
  }

  std::vector<UserLocation> out;
  out.reserve(per_user.size());
  for (std::size_t i = 0; i < per_user.size(); ++i) {
    const auto& cities = per_user[i];
    if (cities.empty()) continue;
    // Dominant city by check-in count; the std::map order makes the
    // lexicographically smallest name win ties.
    auto best = cities.begin();
    for (auto it = cities.begin(); it != cities.end(); ++it)
      if (it->second.count > best->second.count) best = it;
    out.push_back({static_cast<int>(i), best->second.lat_sum / best->second.rows,
                   best->second.lon_sum / best->second.rows, best->first});
  }
  return out;
}

AdjacencyGraph build_graph(const std::vector<UserLocation>& locations, int degree_cap,
                           const KernelSpec& kernel) {
  if (kernel.kind == DistanceKernel::Gaussian && kernel.sigma <= 0.0)
    throw InvalidSigma("gaussian kernel requires sigma > 0");

  int user_count = 0;
  for (const auto& loc : locations) user_count = std::max(user_count, loc.user + 1);

  std::vector<std::string> city(user_count);
  for (const auto& loc : locations) city[loc.user] = loc.city;

  // Group users by city; proposals never cross cities (indicator = 0).
  std::unordered_map<std::string, std::vector<const UserLocation*>> by_city;
  for (const auto& loc : locations) by_city[loc.city].push_back(&loc);

  struct Proposal {
    double dist;
    int a, b;  // a < b
  };
  std::map<std::pair<int, int>, double> proposed;
  for (const auto& [name, members] : by_city) {
    (void)name;
    for (const UserLocation* u : members) {
      std::vector<std::pair<double, int>> cand;
      cand.reserve(members.size());
      for (const UserLocation* v : members) {
        if (v->user == u->user) continue;
        cand.push_back({haversine(u->lat, u->lon, v->lat, v->lon), v->user});
      }
      const std::size_t take = std::min<std::size_t>(degree_cap, cand.size());
      std::partial_sort(cand.begin(), cand.begin() + take, cand.end());
      for (std::size_t k = 0; k < take; ++k) {
        int a = std::min(u->user, cand[k].second);
        int b = std::max(u->user, cand[k].second);
        proposed[{a, b}] = cand[k].first;
      }
    }
  }

  std::vector<Proposal> order;
  order.reserve(proposed.size());
  for (const auto& [key, dist] : proposed) order.push_back({dist, key.first, key.second});
  std::sort(order.begin(), order.end(), [](const Proposal& x, const Proposal& y) {
    if (x.dist != y.dist) return x.dist < y.dist;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  AdjacencyGraph graph(user_count, degree_cap, kernel, std::move(city));
  std::vector<int> deg(user_count, 0);
  for (const Proposal& p : order) {
    if (deg[p.a] >= degree_cap || deg[p.b] >= degree_cap) continue;
    double w = 1.0;
    if (kernel.kind == DistanceKernel::Gaussian)
      w = std::exp(-(p.dist * p.dist) / (2.0 * kernel.sigma * kernel.sigma));
    graph.add_edge(p.a, p.b, w);
    ++deg[p.a];
    ++deg[p.b];
  }
  return graph;
}

std::vector<std::vector<int>> neighbor_layers(const AdjacencyGraph& graph, int i, int D) {
  std::vector<std::vector<int>> layers(std::max(D, 0));
  if (D <= 0) return layers;
  std::vector<int> dist(graph.user_count(), -1);
  dist[i] = 0;
  std::deque<int> frontier{i};
  for (int d = 1; d <= D && !frontier.empty(); ++d) {
    std::deque<int> next;
    for (int u : frontier) {
      for (const auto& [v, w] : graph.neighbors(u)) {
        (void)w;
        if (dist[v] < 0) {
          dist[v] = d;
          layers[d - 1].push_back(v);
          next.push_back(v);
        }
      }
    }
    std::sort(layers[d - 1].begin(), layers[d - 1].end());
    frontier = std::move(next);
  }
  return layers;
}

double transition_prob(const AdjacencyGraph& graph, int i, int k) {
  const auto& nbrs = graph.neighbors(i);
  if (nbrs.empty()) throw IsolatedUser("user " + std::to_string(i) + " has no neighbors");
  double total = 0.0, wk = 0.0;
  for (const auto& [n, w] : nbrs) {
    total += w;
    if (n == k) wk = w;
  }
  return wk / total;
}

double walk_prob(const AdjacencyGraph& graph, int i, int k, int d) {
  if (graph.neighbors(i).empty())
    throw IsolatedUser("user " + std::to_string(i) + " has no neighbors");
  std::vector<double> prob(graph.user_count(), 0.0);
  prob[i] = 1.0;
  for (int step = 0; step < d; ++step) {
    std::vector<double> next(graph.user_count(), 0.0);
    for (int u = 0; u < graph.user_count(); ++u) {
      if (prob[u] == 0.0) continue;
      const auto& nbrs = graph.neighbors(u);
      if (nbrs.empty()) continue;  // walk mass dies at isolated nodes
      double total = 0.0;
      for (const auto& [n, w] : nbrs) {
        (void)n;
        total += w;
      }
      for (const auto& [n, w] : nbrs) next[n] += prob[u] * (w / total);
    }
    prob = std::move(next);
  }
  return prob[k];
}

nlohmann::json AdjacencyGraph::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["user_count"] = user_count_;
  j["degree_cap"] = cap_;
  j["kernel"] = kernel_.kind == DistanceKernel::Constant ? "constant" : "gaussian";
  j["sigma"] = kernel_.sigma;
  j["cities"] = city_;
  nlohmann::json edges = nlohmann::json::array();
  for (int i = 0; i < user_count_; ++i)
    for (const auto& [k, w] : adj_[i])
      if (i < k) edges.push_back({{"i", i}, {"j", k}, {"w", w}});
  j["edges"] = std::move(edges);
  return j;
}

AdjacencyGraph AdjacencyGraph::from_json(const nlohmann::json& j) {
  KernelSpec kernel;
  kernel.kind = j.at("kernel").get<std::string>() == "constant" ? DistanceKernel::Constant
                                                                : DistanceKernel::Gaussian;
  kernel.sigma = j.at("sigma").get<double>();
  AdjacencyGraph graph(j.at("user_count").get<int>(), j.at("degree_cap").get<int>(), kernel,
                       j.at("cities").get<std::vector<std::string>>());
  for (const auto& e : j.at("edges"))
    graph.add_edge(e.at("i").get<int>(), e.at("j").get<int>(), e.at("w").get<double>());
  return graph;
}

}  // namespace dmf
