#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "p2pshare/error.hpp"
#include "p2pshare/log.hpp"
#include "p2pshare/optimize.hpp"

namespace p2pshare {
namespace {

constexpr int kMaxSweeps = 200000;
constexpr int kWindow = 100;
constexpr double kImprovementTol = 1e-10;

}  // namespace

double qp_objective(std::span<const double> self_share, std::span<const double> edge_share) {
  double obj = 0.0;
  for (double a : self_share) obj += a * a;
  for (double w : edge_share) obj += 2.0 * w * w;
  return obj;
}

// Dual block-coordinate ascent on the node multipliers lambda_i:
// w_ii = clip(lambda_i / 2, 0, 1), w_e = clip((lambda_u + lambda_v) / 4, 0, c).
QpShares solve_min_variance_qp(const Graph& graph, double deductible, double gamma) {
  require(std::isfinite(deductible) && deductible > 0.0, "qp: deductible must be > 0");
  require(std::isfinite(gamma) && gamma >= 0.0, "qp: gamma must be finite and >= 0");
  const int n = graph.node_count();
  const double c = gamma / deductible;
  std::vector<double> lambda(static_cast<std::size_t>(n), 2.0);
  std::vector<ClipTerm> terms;

  auto primal = [&](QpShares& out) {
    out.edge_share.resize(graph.edge_count());
    out.self_share.assign(static_cast<std::size_t>(n), 1.0);
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      const auto [u, v] = graph.edge(e);
      out.edge_share[e] = std::clamp((lambda[u] + lambda[v]) / 4.0, 0.0, c);
    }
    // Trim edge shares where a node would be over-allocated, then give each
    // node the rest as its self share.
    std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      sum[graph.edge(e).first] += out.edge_share[e];
      sum[graph.edge(e).second] += out.edge_share[e];
    }
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      const auto [u, v] = graph.edge(e);
      const double f = std::min({1.0, sum[u] > 1.0 ? 1.0 / sum[u] : 1.0, sum[v] > 1.0 ? 1.0 / sum[v] : 1.0});
      out.edge_share[e] *= f;
    }
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      sum[graph.edge(e).first] += out.edge_share[e];
      sum[graph.edge(e).second] += out.edge_share[e];
    }
    for (int i = 0; i < n; ++i) out.self_share[i] = std::clamp(1.0 - sum[i], 0.0, 1.0);
    out.objective = qp_objective(out.self_share, out.edge_share);
  };

  QpShares result;
  if (graph.edge_count() == 0 || c == 0.0) {
    primal(result);
    return result;
  }
  double window_start = std::numeric_limits<double>::infinity();
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
      auto nb = graph.neighbors(i);
      terms.clear();
      terms.push_back({0.0, 2.0, 1.0});
      double now = std::clamp(lambda[i] / 2.0, 0.0, 1.0);
      for (int j : nb) {
        terms.push_back({lambda[j], 4.0, c});
        now += std::clamp((lambda[i] + lambda[j]) / 4.0, 0.0, c);
      }
      residual = std::max(residual, std::abs(now - 1.0));
      lambda[i] = solve_clip_sum(terms, 1.0);
    }
    if (residual < 1e-13) break;
    if ((sweep + 1) % kWindow == 0) {
      primal(result);
      if (std::abs(window_start - result.objective) < kImprovementTol && residual < 1e-9) break;
      window_start = result.objective;
    }
  }
  primal(result);
  result.iterations = sweep + 1;
  log::debug("qp: " + std::to_string(result.iterations) + " sweeps, objective " + std::to_string(result.objective));
  return result;
}

}  // namespace p2pshare
