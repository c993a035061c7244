#include "p2pshare/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "p2pshare/error.hpp"

namespace p2pshare {
namespace {

constexpr double kCapacityTol = 1e-9;

void check_claims(const Graph& graph, const ClaimSample& claims) {
  require(claims.size() == static_cast<std::size_t>(graph.node_count()),
          "settlement: claim sample size " + std::to_string(claims.size()) + " != node count " +
              std::to_string(graph.node_count()));
}

void check_same_graph(const Graph& graph, const EngagementMap& eng, const char* what) {
  if (&eng.graph() != &graph && !(eng.graph() == graph)) {
    fail(ErrorCode::invalid_argument, std::string(what) + ": engagement map is defined on a different graph");
  }
}

SettlementResult start(std::size_t n, const ClaimSample& claims) {
  SettlementResult r;
  r.xi.assign(n, 0.0);
  r.layers.resize(n);
  r.total_in = claims.total();
  return r;
}

void finish(SettlementResult& r) {
  const auto& L = r.layers;
  for (std::size_t i = 0; i < r.xi.size(); ++i) {
    r.xi[i] = L.self_first[i] + L.residual_self[i] + L.friends_paid[i] + L.fof_paid[i];
  }
}

/// Spreads `amount` (at most the map's coverage of `node`) over its
/// contracts pro rata of their magnitudes. Returns what was received.
double spread_pro_rata(const Graph& g, const EngagementMap& eng, int node, double amount,
                       std::vector<double>& paid) {
  const double cover = eng.coverage(node);
  if (amount <= 0.0 || cover <= 0.0) return 0.0;
  const double factor = std::min(1.0, amount / cover);
  double received = 0.0;
  auto nb = g.neighbors(node);
  auto inc = g.incident_edges(node);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    const double gamma = eng.magnitude(inc[k]);
    if (gamma <= 0.0) continue;
    const double c = factor >= 1.0 ? gamma : gamma * factor;
    paid[nb[k]] += c;
    received += c;
  }
  return std::min(received, amount);
}

SettlementResult uniform_layers(const Graph& graph, const ClaimSample& claims, double z, double gamma) {
  check_claims(graph, claims);
  const int n = graph.node_count();
  for (int i = 0; i < n; ++i) {
    if (graph.degree(i) == 0) fail(ErrorCode::domain, "settlement: isolated node " + std::to_string(i));
  }
  auto r = start(static_cast<std::size_t>(n), claims);
  auto& L = r.layers;
  for (int j = 0; j < n; ++j) {
    const double x = claims.x[j];
    if (x <= 0.0) continue;
    const double self = std::min(x, z);
    const double rest = x - self;
    const double c = std::min(gamma, rest / graph.degree(j));
    double received = 0.0;
    if (c > 0.0) {
      for (int k : graph.neighbors(j)) {
        L.friends_paid[k] += c;
        received += c;
      }
    }
    received = std::min(received, rest);
    L.self_first[j] = self;
    L.friends_received[j] = received;
    L.residual_self[j] = rest - received;
  }
  finish(r);
  return r;
}

}  // namespace

EngagementMap::EngagementMap(GraphPtr graph, std::vector<double> magnitudes)
    : graph_(std::move(graph)), magnitudes_(std::move(magnitudes)) {
  require(graph_ != nullptr, "engagement: null graph");
  require(magnitudes_.size() == graph_->edge_count(), "engagement: one magnitude per edge required");
  coverage_.assign(static_cast<std::size_t>(graph_->node_count()), 0.0);
  for (std::size_t e = 0; e < magnitudes_.size(); ++e) {
    const double m = magnitudes_[e];
    require(std::isfinite(m) && m >= 0.0, "engagement: magnitudes must be finite and >= 0");
    const auto [u, v] = graph_->edge(e);
    coverage_[u] += m;
    coverage_[v] += m;
  }
}

EngagementMap EngagementMap::zeros(GraphPtr graph) {
  const auto m = graph->edge_count();
  return EngagementMap(std::move(graph), std::vector<double>(m, 0.0));
}

EngagementMap EngagementMap::uniform(GraphPtr graph, double gamma) {
  const auto m = graph->edge_count();
  return EngagementMap(std::move(graph), std::vector<double>(m, gamma));
}

EngagementMap EngagementMap::from_triples(GraphPtr graph, std::span<const std::tuple<int, int, double>> triples) {
  require(graph != nullptr, "engagement: null graph");
  std::vector<double> mags(graph->edge_count(), 0.0);
  std::vector<bool> set(graph->edge_count(), false);
  for (const auto& [u, v, gamma] : triples) {
    const auto e = graph->edge_index(u, v);
    if (!e) {
      fail(ErrorCode::invalid_argument,
           "engagement on a non-edge: [" + std::to_string(u) + ", " + std::to_string(v) + "]");
    }
    if (set[*e]) {
      fail(ErrorCode::invalid_argument,
           "engagement given twice for [" + std::to_string(u) + ", " + std::to_string(v) + "]");
    }
    set[*e] = true;
    mags[*e] = gamma;
  }
  return EngagementMap(std::move(graph), std::move(mags));
}

double EngagementMap::coverage(int node) const {
  require(node >= 0 && node < static_cast<int>(coverage_.size()), "node_coverage: node out of range");
  return coverage_[node];
}

double EngagementMap::total() const { return std::accumulate(magnitudes_.begin(), magnitudes_.end(), 0.0); }

std::size_t EngagementMap::support_size(double tol) const {
  return static_cast<std::size_t>(
      std::count_if(magnitudes_.begin(), magnitudes_.end(), [tol](double m) { return m > tol; }));
}

void SettlementLayers::resize(std::size_t n) {
  for (auto* v : {&self_first, &friends_received, &friends_paid, &fof_received, &fof_paid, &residual_self}) {
    v->assign(n, 0.0);
  }
}

double SettlementResult::total_out() const { return std::accumulate(xi.begin(), xi.end(), 0.0); }

double uniform_contribution(double x, int degree, double gamma) {
  require(degree >= 1, "uniform_contribution: isolated node has no contribution schedule");
  require(gamma >= 0.0, "uniform_contribution: gamma must be >= 0");
  require(x >= 0.0, "uniform_contribution: loss must be >= 0");
  return std::min(gamma, x / degree);
}

SettlementResult settle_uniform(const Graph& graph, const ClaimSample& claims, double deductible, double gamma) {
  require(deductible > 0.0, "settle_uniform: deductible must be > 0");
  require(std::isfinite(gamma) && gamma >= 0.0, "settle_uniform: gamma must be finite and >= 0");
  return uniform_layers(graph, claims, 0.0, gamma);
}

SettlementResult settle_uniform_with_self(const Graph& graph, const ClaimSample& claims, double deductible,
                                          double self_contribution, double dbar) {
  const double z = self_contribution;
  require(z >= 0.0, "settle_uniform_with_self: z must be >= 0");
  if (z > deductible) fail(ErrorCode::domain, "settle_uniform_with_self: self-contribution exceeds the deductible");
  if (dbar <= 0.0) dbar = graph.mean_degree();
  require(dbar > 0.0, "settle_uniform_with_self: mean degree must be > 0");
  return uniform_layers(graph, claims, z, (deductible - z) / dbar);
}

SettlementResult settle_personalized(const Graph& graph, const EngagementMap& eng, const ClaimSample& claims,
                                     double deductible) {
  check_claims(graph, claims);
  check_same_graph(graph, eng, "settle_personalized");
  require(deductible > 0.0, "settle_personalized: deductible must be > 0");
  const int n = graph.node_count();
  auto r = start(static_cast<std::size_t>(n), claims);
  auto& L = r.layers;
  for (int j = 0; j < n; ++j) {
    const double x = claims.x[j];
    if (x <= 0.0) continue;
    const double got = spread_pro_rata(graph, eng, j, x, L.friends_paid);
    L.friends_received[j] = got;
    L.residual_self[j] = std::max(0.0, x - got);
  }
  finish(r);
  return r;
}

SettlementResult settle_two_layer(const Graph& graph, const EngagementMap& eng1, const Graph& fof_graph,
                                  const EngagementMap& eng2, const ClaimSample& claims, double deductible,
                                  double self_contribution) {
  check_claims(graph, claims);
  check_same_graph(graph, eng1, "settle (friends layer)");
  check_same_graph(fof_graph, eng2, "settle (friends-of-friends layer)");
  require(fof_graph.node_count() == graph.node_count(), "settle: friends-of-friends graph size mismatch");
  const double z = self_contribution;
  require(z >= 0.0 && z <= deductible, "settle: self-contribution must lie in [0, s]");
  const int n = graph.node_count();
  const double room = deductible - z;
  for (int i = 0; i < n; ++i) {
    const double cap = eng1.coverage(i) + eng2.coverage(i);
    if (cap > room + kCapacityTol * std::max(1.0, deductible)) {
      fail(ErrorCode::capacity, "settle: node " + std::to_string(i) + " engages " + std::to_string(cap) +
                                    " > s - z = " + std::to_string(room));
    }
  }

  auto r = start(static_cast<std::size_t>(n), claims);
  auto& L = r.layers;
  for (int j = 0; j < n; ++j) {
    const double x = claims.x[j];
    if (x <= 0.0) continue;
    const double self = std::min(x, z);
    double rest = x - self;
    const double got1 = spread_pro_rata(graph, eng1, j, rest, L.friends_paid);
    rest -= got1;
    const double got2 = spread_pro_rata(fof_graph, eng2, j, rest, L.fof_paid);
    rest -= got2;
    L.self_first[j] = self;
    L.friends_received[j] = got1;
    L.fof_received[j] = got2;
    L.residual_self[j] = std::max(0.0, rest);
  }
  finish(r);
  return r;
}

SettlementResult settle_linear(const Graph& graph, std::span<const double> self_share,
                               std::span<const double> edge_share, const ClaimSample& claims) {
  check_claims(graph, claims);
  const int n = graph.node_count();
  require(self_share.size() == static_cast<std::size_t>(n), "settle_linear: one self share per node");
  require(edge_share.size() == graph.edge_count(), "settle_linear: one share per edge");
  auto r = start(static_cast<std::size_t>(n), claims);
  auto& L = r.layers;
  for (int j = 0; j < n; ++j) {
    const double x = claims.x[j];
    if (x <= 0.0) continue;
    double received = 0.0;
    auto nb = graph.neighbors(j);
    auto inc = graph.incident_edges(j);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const double c = edge_share[inc[k]] * x;
      if (c <= 0.0) continue;
      L.friends_paid[nb[k]] += c;
      received += c;
    }
    received = std::min(received, x);
    L.friends_received[j] = received;
    L.residual_self[j] = x - received;
  }
  finish(r);
  return r;
}

}  // namespace p2pshare
