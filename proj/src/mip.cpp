#include <algorithm>
#include <numeric>
#include <string>

#include "p2pshare/error.hpp"
#include "p2pshare/log.hpp"
#include "p2pshare/optimize.hpp"

namespace p2pshare {
namespace {

LpProblem restrict_to(const LpProblem& p, const std::vector<std::size_t>& keep) {
  const Graph& g = *p.graph;
  std::vector<Edge> edges;
  edges.reserve(keep.size());
  for (std::size_t e : keep) edges.push_back(g.edge(e));
  LpProblem sub = p;
  sub.graph = share(Graph::from_edges(g.node_count(), std::move(edges)));
  return sub;
}

// Maps a solution on a sub-support back to the full edge set.
EngagementSolution lift(const LpProblem& p, const std::vector<std::size_t>& keep, const EngagementSolution& sub) {
  const Graph& g = *p.graph;
  const Graph& sg = sub.engagement.graph();
  std::vector<double> mags(g.edge_count(), 0.0);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto [u, v] = g.edge(keep[k]);
    mags[keep[k]] = sub.engagement.magnitude(*sg.edge_index(u, v));
  }
  return {EngagementMap(p.graph, std::move(mags)), sub.objective, sub.exact, sub.stage};
}

struct BranchAndBound {
  const LpProblem& p;
  std::size_t m;
  std::vector<std::size_t> order;
  std::vector<int> state;  // 1 include, -1 exclude, 0 open
  double best = -1.0;
  std::vector<std::size_t> best_support;
  std::size_t nodes = 0;

  double value(const std::vector<std::size_t>& keep) const {
    return keep.empty() ? 0.0 : engagement_lp_value(restrict_to(p, keep));
  }

  std::vector<std::size_t> collect(bool include_open) const {
    std::vector<std::size_t> keep;
    for (std::size_t e = 0; e < state.size(); ++e) {
      if (state[e] == 1 || (include_open && state[e] == 0)) keep.push_back(e);
    }
    return keep;
  }

  void offer(const std::vector<std::size_t>& keep) {
    const double v = value(keep);
    if (v > best + 1e-9) {
      best = v;
      best_support = keep;
    }
  }

  void search(std::size_t depth, std::size_t included) {
    ++nodes;
    std::size_t open = 0;
    for (std::size_t k = depth; k < order.size(); ++k) open += state[order[k]] == 0;
    if (included == m || open == 0) {
      offer(collect(false));
      return;
    }
    if (included + open <= m) {
      offer(collect(true));
      return;
    }
    const double bound = std::min(value(collect(true)), static_cast<double>(m) * p.gamma);
    if (bound <= best + 1e-9) return;
    const std::size_t e = order[depth];
    state[e] = 1;
    search(depth + 1, included + 1);
    state[e] = -1;
    search(depth + 1, included);
    state[e] = 0;
  }
};

EngagementSolution greedy_prune(const LpProblem& p, std::size_t m) {
  std::vector<std::size_t> keep(p.graph->edge_count());
  std::iota(keep.begin(), keep.end(), 0);
  auto sol = solve_engagement_lp(p);
  auto current = sol;
  for (;;) {
    std::vector<std::size_t> support;
    for (std::size_t e : keep) {
      if (current.engagement.magnitude(e) > 0.0) support.push_back(e);
    }
    if (support.size() <= m) break;
    std::stable_sort(support.begin(), support.end(), [&](std::size_t a, std::size_t b) {
      return current.engagement.magnitude(a) < current.engagement.magnitude(b);
    });
    const std::size_t batch = std::max<std::size_t>(1, (support.size() - m) / 10);
    support.erase(support.begin(), support.begin() + static_cast<std::ptrdiff_t>(batch));
    std::sort(support.begin(), support.end());
    keep = support;
    current = lift(p, keep, solve_engagement_lp(restrict_to(p, keep)));
  }
  current.exact = false;
  return current;
}

}  // namespace

EngagementSolution solve_sparse_mip(const LpProblem& problem, std::size_t max_edges) {
  problem.validate();
  const std::size_t E = problem.graph->edge_count();
  auto full = solve_engagement_lp(problem);
  if (full.engagement.support_size() <= max_edges) return full;
  if (max_edges == 0) return {EngagementMap::zeros(problem.graph), 0.0, true, 1};
  if (E > kExactMipEdgeLimit) {
    log::info("mip: " + std::to_string(E) + " edges exceeds the exact limit, using greedy pruning");
    return greedy_prune(problem, max_edges);
  }

  BranchAndBound bb{problem, max_edges, {}, std::vector<int>(E, 0), -1.0, {}, 0};
  bb.order.resize(E);
  std::iota(bb.order.begin(), bb.order.end(), 0);
  std::stable_sort(bb.order.begin(), bb.order.end(), [&](std::size_t a, std::size_t b) {
    return full.engagement.magnitude(a) > full.engagement.magnitude(b);
  });
  const auto seed = greedy_prune(problem, max_edges);
  std::vector<std::size_t> seed_support;
  for (std::size_t e = 0; e < E; ++e) {
    if (seed.engagement.magnitude(e) > 0.0) seed_support.push_back(e);
  }
  bb.best = seed.objective;
  bb.best_support = seed_support;
  bb.search(0, 0);
  log::debug("mip: explored " + std::to_string(bb.nodes) + " branch-and-bound nodes");

  if (bb.best_support.empty()) return {EngagementMap::zeros(problem.graph), 0.0, true, 1};
  auto sol = lift(problem, bb.best_support, solve_engagement_lp(restrict_to(problem, bb.best_support)));
  sol.exact = true;
  return sol;
}

}  // namespace p2pshare
