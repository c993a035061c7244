#include <algorithm>
#include <cmath>
#include <string>

#include "p2pshare/error.hpp"
#include "p2pshare/log.hpp"
#include "p2pshare/optimize.hpp"

namespace p2pshare {

TwoStageResult solve_two_stage(const GraphPtr& graph, double deductible, double gamma1, double gamma2,
                               double self_contribution) {
  require(graph != nullptr, "two-stage: null graph");
  require(std::isfinite(deductible) && deductible > 0.0, "two-stage: deductible must be > 0");
  require(gamma1 >= 0.0 && gamma2 >= 0.0, "two-stage: caps must be >= 0");
  const double z = self_contribution;
  if (!(z >= 0.0 && z <= deductible)) fail(ErrorCode::domain, "two-stage: self-contribution must lie in [0, s]");
  const double room = deductible - z;
  const int n = graph->node_count();

  TwoStageResult out;
  out.stage1 = solve_engagement_lp({graph, gamma1, room, {}});
  out.stage1.stage = 1;

  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  std::vector<double> residual(static_cast<std::size_t>(n), 0.0);
  const double tol = 1e-9 * std::max(1.0, deductible);
  for (int i = 0; i < n; ++i) {
    const double left = room - out.stage1.engagement.coverage(i);
    if (left > tol) {
      mask[i] = true;
      out.eligible.push_back(i);
      residual[i] = std::min(room, left);
    }
  }
  out.fof_graph = share(friends_of_friends_mask(*graph, mask));
  log::info("two-stage: " + std::to_string(out.eligible.size()) + " eligible nodes, " +
            std::to_string(out.fof_graph->edge_count()) + " friends-of-friends pairs");
  LpProblem stage2{out.fof_graph, gamma2, room, std::move(residual)};
  out.stage2 = solve_engagement_lp(stage2);
  out.stage2.stage = 2;
  return out;
}

}  // namespace p2pshare
