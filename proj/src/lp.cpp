#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "p2pshare/error.hpp"
#include "p2pshare/log.hpp"
#include "p2pshare/optimize.hpp"

namespace p2pshare {
namespace {

constexpr int kBalanceSweeps = 300;

// Max-flow network on the bipartite double cover. Node layout:
// 0 = source, 1 = sink, 2 + i = L_i, 2 + n + i = R_i.
struct Cover {
  MaxFlow flow;
  std::vector<int> uv, vu;
  int n;

  Cover(const LpProblem& p, std::span<const double> warm) : flow(2 + 2 * p.graph->node_count()), n(p.graph->node_count()) {
    const Graph& g = *p.graph;
    std::vector<double> cov(static_cast<std::size_t>(n), 0.0);
    if (!warm.empty()) {
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        cov[g.edge(e).first] += warm[e];
        cov[g.edge(e).second] += warm[e];
      }
    }
    for (int i = 0; i < n; ++i) {
      const double cap = p.node_capacity(i);
      const double f = std::min(cov[i], cap);
      flow.add_arc(0, 2 + i, cap, f);
      flow.add_arc(2 + n + i, 1, cap, f);
    }
    uv.reserve(g.edge_count());
    vu.reserve(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto [u, v] = g.edge(e);
      const double f = warm.empty() ? 0.0 : std::min(warm[e], p.gamma);
      uv.push_back(flow.add_arc(2 + u, 2 + n + v, p.gamma, f));
      vu.push_back(flow.add_arc(2 + v, 2 + n + u, p.gamma, f));
    }
  }
};

// Dual coordinate ascent for the projection of tau * 1 onto the feasible
// polytope: g_e = clip(tau - mu_u - mu_v, 0, gamma), mu >= 0.
std::vector<double> balanced_start(const LpProblem& p) {
  const Graph& g = *p.graph;
  const int n = g.node_count();
  const double c = p.gamma;
  const double tau = 10.0 * (p.capacity + c);
  std::vector<double> mu(static_cast<std::size_t>(n), 0.0);
  std::vector<ClipTerm> terms;
  const double tol = 1e-10 * std::max(1.0, tau);
  for (int sweep = 0; sweep < kBalanceSweeps; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      auto nb = g.neighbors(i);
      if (nb.empty()) continue;
      const double cap = p.node_capacity(i);
      double next = 0.0;
      if (cap <= 0.0) {
        next = tau;
      } else {
        double at_zero = 0.0;
        terms.clear();
        for (int j : nb) {
          terms.push_back({tau - mu[j], 1.0, c});
          at_zero += std::clamp(tau - mu[j], 0.0, c);
        }
        if (at_zero > cap) next = std::max(0.0, -solve_clip_sum(terms, cap));
      }
      moved = std::max(moved, std::abs(next - mu[i]));
      mu[i] = next;
    }
    if (moved <= tol) {
      log::debug("lp balance converged after " + std::to_string(sweep + 1) + " sweeps");
      break;
    }
  }
  std::vector<double> x(g.edge_count());
  std::vector<double> cov(static_cast<std::size_t>(n), 0.0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto [u, v] = g.edge(e);
    x[e] = std::clamp(tau - mu[u] - mu[v], 0.0, c);
    cov[u] += x[e];
    cov[v] += x[e];
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto [u, v] = g.edge(e);
    double f = 1.0;
    if (cov[u] > p.node_capacity(u)) f = std::min(f, p.node_capacity(u) / cov[u]);
    if (cov[v] > p.node_capacity(v)) f = std::min(f, p.node_capacity(v) / cov[v]);
    x[e] *= f;
  }
  return x;
}

}  // namespace

void LpProblem::validate() const {
  require(graph != nullptr, "lp: null graph");
  require(std::isfinite(gamma) && gamma >= 0.0, "lp: gamma must be finite and >= 0");
  require(std::isfinite(capacity) && capacity >= 0.0, "lp: capacity must be finite and >= 0");
  if (!residual.empty()) {
    require(residual.size() == static_cast<std::size_t>(graph->node_count()), "lp: one residual per node");
    for (double r : residual) {
      require(std::isfinite(r) && r >= 0.0, "lp: residual capacities must be >= 0");
      require(r <= capacity * (1.0 + 1e-12), "lp: residual capacity exceeds the deductible");
    }
  }
}

double solve_clip_sum(std::vector<ClipTerm>& terms, double target) {
  struct Event {
    double at;
    double dslope;
  };
  std::vector<Event> events;
  events.reserve(2 * terms.size());
  for (const auto& t : terms) {
    if (t.cap <= 0.0) continue;
    events.push_back({-t.offset, 1.0 / t.slope});
    events.push_back({-t.offset + t.slope * t.cap, -1.0 / t.slope});
  }
  if (events.empty()) return target <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.at < b.at; });
  double t = events.front().at;
  if (target <= 0.0) return t;
  double value = 0.0;
  double slope = 0.0;
  for (const auto& ev : events) {
    const double next = value + slope * (ev.at - t);
    if (slope > 0.0 && next >= target) return t + (target - value) / slope;
    value = next;
    t = ev.at;
    slope += ev.dslope;
  }
  return value >= target * (1.0 - 1e-12) ? t : std::numeric_limits<double>::infinity();
}

double engagement_lp_value(const LpProblem& problem) {
  problem.validate();
  if (problem.graph->edge_count() == 0) return 0.0;
  Cover cover(problem, {});
  return cover.flow.run(0, 1) / 2.0;
}

EngagementSolution solve_engagement_lp(const LpProblem& problem) {
  problem.validate();
  const Graph& g = *problem.graph;
  if (g.edge_count() == 0 || problem.gamma == 0.0) {
    return {EngagementMap::zeros(problem.graph), 0.0, true, 1};
  }
  const auto warm = balanced_start(problem);
  Cover cover(problem, warm);
  cover.flow.run(0, 1);
  std::vector<double> x(g.edge_count());
  double total = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    x[e] = std::clamp((cover.flow.flow(cover.uv[e]) + cover.flow.flow(cover.vu[e])) / 2.0, 0.0, problem.gamma);
    total += x[e];
  }
  EngagementMap eng(problem.graph, std::move(x));
  for (int i = 0; i < g.node_count(); ++i) {
    const double cap = problem.node_capacity(i);
    if (eng.coverage(i) > cap + 1e-9 * std::max(1.0, cap)) {
      fail(ErrorCode::numeric, "lp: node " + std::to_string(i) + " over capacity after solve");
    }
  }
  // Report the optimum from a cold max-flow; the balanced point only
  // reaches it up to rounding.
  const double value = engagement_lp_value(problem);
  if (std::abs(value - total) > 1e-7 * std::max(1.0, value)) {
    fail(ErrorCode::numeric, "lp: balanced solution misses the optimum by " + std::to_string(value - total));
  }
  return {std::move(eng), value, true, 1};
}

double node_coverage(const EngagementMap& eng, int node) { return eng.coverage(node); }

}  // namespace p2pshare
