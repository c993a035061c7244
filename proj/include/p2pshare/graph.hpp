#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "p2pshare/rng.hpp"

namespace p2pshare {

using Edge = std::pair<int, int>;
using EdgeIndex = std::uint32_t;

/// Immutable simple undirected graph on nodes 0..n-1.
///
/// Edges are stored once as (u, v) with u < v, sorted lexicographically, so
/// an edge's index is a deterministic function of the edge set. Adjacency is
/// kept in CSR form with neighbor lists sorted ascending; each adjacency slot
/// also records the index of the edge it came from.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph, normalizing every pair to u < v. Throws on self-loops,
  /// duplicate edges, or endpoints outside [0, n).
  static Graph from_edges(int n, std::vector<Edge> edges);

  int node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }

  std::span<const int> neighbors(int i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }
  /// Edge indices aligned with neighbors(i).
  std::span<const EdgeIndex> incident_edges(int i) const {
    return {adj_edge_.data() + offsets_[i], adj_edge_.data() + offsets_[i + 1]};
  }

  int degree(int i) const { return degrees_[i]; }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  double mean_degree() const;

  bool has_edge(int u, int v) const { return edge_index(u, v).has_value(); }
  std::optional<EdgeIndex> edge_index(int u, int v) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<int> adj_;
  std::vector<EdgeIndex> adj_edge_;
  std::vector<int> degrees_;
};

using GraphPtr = std::shared_ptr<const Graph>;

inline GraphPtr share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

/// Parameters of the rounded, shifted Gamma degree law
/// D = min{min_degree + round(Delta), n - 1}, Delta ~ Gamma(mean - min_degree, sd).
struct DegreeSpec {
  double mean_degree = 20.0;
  double degree_sd = 0.0;
  int min_degree = 5;

  void validate() const;
};

/// Incidence structure: edge endpoints and, per node, the indices of its
/// incident edges. Node j lists exactly d_j edges.
struct IncidenceView {
  std::vector<Edge> endpoints;
  std::vector<std::vector<EdgeIndex>> incident;
};

/// Samples a degree vector of length n. The whole vector is redrawn until its
/// sum is even; gives up after max_attempts draws.
std::vector<int> sample_degree_sequence(const DegreeSpec& spec, int n, Rng& rng,
                                        int max_attempts = 100);

/// Returns the 1-based prefix k at which the Erdos-Gallai inequality fails,
/// 0 if the sequence is graphical. Odd sums are reported separately by
/// realize_graph.
std::size_t erdos_gallai_violation(std::span<const int> degrees);

/// Havel-Hakimi realization followed by `shuffle_swaps` attempted
/// degree-preserving double-edge swaps. Deterministic for fixed inputs and
/// generator state.
Graph realize_graph(std::span<const int> degrees, Rng& rng, std::size_t shuffle_swaps);

/// Default swap budget: 10 attempted swaps per edge.
inline std::size_t default_swaps(std::span<const int> degrees) {
  std::size_t total = 0;
  for (int d : degrees) total += static_cast<std::size_t>(d);
  return 10 * (total / 2);
}

/// Samples degrees and realizes them, resampling non-graphical vectors up to
/// max_attempts times.
Graph generate_graph(const DegreeSpec& spec, int n, Rng& rng, int max_attempts = 100);

/// Graph on the same node set whose edges join two eligible nodes that share
/// a common neighbor and are not already adjacent.
Graph friends_of_friends(const Graph& graph, std::span<const int> eligible);
Graph friends_of_friends_mask(const Graph& graph, const std::vector<bool>& eligible);

IncidenceView incidence(const Graph& graph);

// Graph JSON: {"n": int, "edges": [[u, v], ...]} with u < v, sorted.
std::string graph_to_json(const Graph& graph);
Graph graph_from_json(const std::string& text);
void save_graph(const Graph& graph, const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace p2pshare
