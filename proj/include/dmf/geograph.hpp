#ifndef DMF_GEOGRAPH_HPP
#define DMF_GEOGRAPH_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "dmf/dataio.hpp"

#include <json.hpp>

namespace dmf {

struct UserLocation {
  int user;
  double lat;
  double lon;
  std::string city;  // dominant city of the user's check-ins
};

enum class DistanceKernel { Constant, Gaussian };

struct KernelSpec {
  DistanceKernel kind = DistanceKernel::Constant;
  double sigma = 1.0;  // only used by the gaussian kernel
};

// Great-circle distance in kilometers (Earth radius 6371.0 km).
double haversine(double lat1, double lon1, double lat2, double lon2);

// Capped, same-city, symmetric weighted user graph.
class AdjacencyGraph {
 public:
  AdjacencyGraph() = default;
  AdjacencyGraph(int user_count, int degree_cap, KernelSpec kernel,
                 std::vector<std::string> city);

  void add_edge(int a, int b, double w);

  int user_count() const { return user_count_; }
  int degree_cap() const { return cap_; }
  const KernelSpec& kernel() const { return kernel_; }
  bool constant_weights() const { return kernel_.kind == DistanceKernel::Constant; }

  int degree(int i) const { return static_cast<int>(adj_[i].size()); }
  // Neighbors sorted by ascending user index.
  const std::vector<std::pair<int, double>>& neighbors(int i) const { return adj_[i]; }
  double weight(int i, int k) const;  // 0 when no edge
  const std::string& city(int i) const { return city_[i]; }

  // Number of users sharing user i's city.
  int city_size(int i) const;

  std::size_t edge_count() const;

  nlohmann::json to_json() const;
  static AdjacencyGraph from_json(const nlohmann::json& j);

 private:
  int user_count_ = 0;
  int cap_ = 0;
  KernelSpec kernel_;
  std::vector<std::string> city_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  mutable std::unordered_map<std::string, int> city_count_;  // lazy cache
};

// Dominant city (argmax by check-in count, lexicographic tie-break) and the
// arithmetic centroid of that city's check-ins, per user index.
std::vector<UserLocation> derive_locations(
    const std::vector<CheckinRecord>& records,
    const std::unordered_map<std::string, int>& user_index);

// Each user proposes its N nearest same-city users; proposals are inserted
// greedily in ascending distance order while both endpoints have capacity.
AdjacencyGraph build_graph(const std::vector<UserLocation>& locations, int degree_cap,
                           const KernelSpec& kernel);

// BFS layers 1..D by exact shortest-path distance; each layer sorted ascending.
std::vector<std::vector<int>> neighbor_layers(const AdjacencyGraph& graph, int i, int D);

// One-step transition probability w_ik / sum of i's edge weights.
double transition_prob(const AdjacencyGraph& graph, int i, int k);

// d-step walk probability from the row-normalized transition matrix.
double walk_prob(const AdjacencyGraph& graph, int i, int k, int d);

enum class WalkMode { DeterministicLayers, Sampled };
enum class WalkScale { Paper, Normalized };

struct WalkPolicy {
  int D = 2;  // D = 0 means no communication
  WalkMode mode = WalkMode::DeterministicLayers;
  WalkScale scale = WalkScale::Paper;
};

}  // namespace dmf

#endif
