#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "p2pshare/graph.hpp"
#include "p2pshare/sharing.hpp"

namespace p2pshare {

/// max sum of edge magnitudes subject to 0 <= g_e <= gamma and, per node,
/// sum of incident g_e <= capacity (or residual[i] when given).
struct LpProblem {
  GraphPtr graph;
  double gamma = 0.0;
  double capacity = 0.0;
  std::vector<double> residual;

  double node_capacity(int i) const { return residual.empty() ? capacity : residual[i]; }
  void validate() const;
};

struct EngagementSolution {
  EngagementMap engagement;
  double objective = 0.0;
  bool exact = true;
  int stage = 1;
};

/// Exact LP optimum via max-flow on the bipartite double cover. Among optimal
/// solutions a balanced one (close to the least-squares point of the optimal
/// face) is returned; the choice is deterministic.
EngagementSolution solve_engagement_lp(const LpProblem& problem);

/// Optimal objective only, without the balancing pass.
double engagement_lp_value(const LpProblem& problem);

double node_coverage(const EngagementMap& eng, int node);

/// Graphs with at most this many edges are solved exactly by the MIP.
inline constexpr std::size_t kExactMipEdgeLimit = 24;

/// At most m edges with nonzero magnitude. Exact branch-and-bound up to
/// kExactMipEdgeLimit edges, greedy pruning above (exact = false).
EngagementSolution solve_sparse_mip(const LpProblem& problem, std::size_t max_edges);

/// Linear shares W: self_share[i] = w_ii, edge_share[e] = w_uv = w_vu.
struct QpShares {
  std::vector<double> self_share;
  std::vector<double> edge_share;
  double objective = 0.0;
  int iterations = 0;
};

/// min sum_i w_ii^2 + 2 sum_e w_e^2 with unit node sums, 0 <= w_ii <= 1 and
/// 0 <= w_e <= gamma / s.
QpShares solve_min_variance_qp(const Graph& graph, double deductible, double gamma);

double qp_objective(std::span<const double> self_share, std::span<const double> edge_share);

struct TwoStageResult {
  EngagementSolution stage1;
  std::vector<int> eligible;
  GraphPtr fof_graph;
  EngagementSolution stage2;
};

/// Stage 1 on the friendship graph with cap gamma1 and capacity s - z; stage 2
/// on the friends-of-friends graph of under-covered nodes with the leftover
/// capacity and cap gamma2.
TwoStageResult solve_two_stage(const GraphPtr& graph, double deductible, double gamma1, double gamma2,
                               double self_contribution = 0.0);

// Building blocks, exposed for testing.

/// Dinic max-flow on real capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);
  /// Returns the arc id; `flow` presets a feasible initial flow.
  int add_arc(int from, int to, double capacity, double flow = 0.0);
  /// Augments from the current flow to a maximum flow; returns its value.
  double run(int source, int sink);
  double flow(int arc) const { return arcs_[arc].flow; }

 private:
  struct Arc {
    int to;
    double cap;
    double flow;
  };
  bool bfs(int s, int t);
  double dfs(int v, int t, double pushed);

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  double eps_ = 1e-12;
};

/// One term clip((t + offset) / slope, 0, cap) of a monotone sum.
struct ClipTerm {
  double offset;
  double slope;
  double cap;
};

/// Smallest t with sum_k clip((t + offset_k) / slope_k, 0, cap_k) = target.
/// target must lie in [0, sum of caps].
double solve_clip_sum(std::vector<ClipTerm>& terms, double target);

struct SimplexResult {
  std::vector<double> x;
  double objective = 0.0;
  bool bounded = true;
};

/// Dense tableau simplex with Bland's rule: max c.x s.t. A x <= b, x >= 0,
/// b >= 0.
SimplexResult simplex_maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                               const std::vector<double>& c);

/// The engagement LP written out densely and handed to simplex_maximize.
double engagement_lp_value_simplex(const LpProblem& problem);

}  // namespace p2pshare
