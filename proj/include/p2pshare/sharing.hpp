#pragma once

#include <span>
#include <tuple>
#include <vector>

#include "p2pshare/graph.hpp"
#include "p2pshare/loss_model.hpp"

namespace p2pshare {

/// Per-edge engagement magnitudes on a fixed graph, one value per unordered
/// pair, plus cached per-node coverage (sum of incident magnitudes).
class EngagementMap {
 public:
  EngagementMap() = default;
  EngagementMap(GraphPtr graph, std::vector<double> magnitudes);

  static EngagementMap zeros(GraphPtr graph);
  static EngagementMap uniform(GraphPtr graph, double gamma);
  /// Throws if a triple names a pair that is not an edge of the graph or
  /// appears twice.
  static EngagementMap from_triples(GraphPtr graph, std::span<const std::tuple<int, int, double>> triples);

  const Graph& graph() const { return *graph_; }
  const GraphPtr& graph_ptr() const { return graph_; }
  std::span<const double> magnitudes() const { return magnitudes_; }
  double magnitude(std::size_t edge) const { return magnitudes_[edge]; }
  std::span<const double> coverages() const { return coverage_; }
  double coverage(int node) const;
  double total() const;
  /// Number of edges with magnitude above tol.
  std::size_t support_size(double tol = 0.0) const;

 private:
  GraphPtr graph_;
  std::vector<double> magnitudes_;
  std::vector<double> coverage_;
};

/// Per-node breakdown of who paid for what. For every node
///   x_i = self_first + friends_received + fof_received + residual_self
///   xi_i = self_first + residual_self + friends_paid + fof_paid.
struct SettlementLayers {
  std::vector<double> self_first;
  std::vector<double> friends_received;
  std::vector<double> friends_paid;
  std::vector<double> fof_received;
  std::vector<double> fof_paid;
  std::vector<double> residual_self;

  void resize(std::size_t n);
};

struct SettlementResult {
  std::vector<double> xi;
  SettlementLayers layers;
  double total_in = 0.0;

  double total_out() const;
};

/// min{gamma, x / d}: what each friend of a claimant with capped loss x and
/// degree d pays under identical reciprocal contracts.
double uniform_contribution(double x, int degree, double gamma);

/// Identical reciprocal contracts of magnitude gamma on every edge.
SettlementResult settle_uniform(const Graph& graph, const ClaimSample& claims, double deductible,
                                double gamma);

/// Self layer z first, then identical contracts of magnitude (s - z) / dbar.
/// dbar <= 0 means "use the graph's mean degree".
SettlementResult settle_uniform_with_self(const Graph& graph, const ClaimSample& claims, double deductible,
                                          double self_contribution, double dbar = 0.0);

/// Personalized magnitudes; friends pay pro rata of their engagement.
SettlementResult settle_personalized(const Graph& graph, const EngagementMap& eng, const ClaimSample& claims,
                                     double deductible);

/// Layers in order: self z, friends (eng1 on graph), friends of friends
/// (eng2 on fof_graph), residual self.
SettlementResult settle_two_layer(const Graph& graph, const EngagementMap& eng1, const Graph& fof_graph,
                                  const EngagementMap& eng2, const ClaimSample& claims, double deductible,
                                  double self_contribution);

/// Linear sharing xi = W x where W is symmetric, supported on graph edges
/// plus the diagonal, with unit row sums.
SettlementResult settle_linear(const Graph& graph, std::span<const double> self_share,
                               std::span<const double> edge_share, const ClaimSample& claims);

}  // namespace p2pshare
