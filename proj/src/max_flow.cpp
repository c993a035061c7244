#include <algorithm>
#include <limits>
#include <queue>

#include "p2pshare/error.hpp"
#include "p2pshare/optimize.hpp"

namespace p2pshare {

MaxFlow::MaxFlow(int nodes) : out_(static_cast<std::size_t>(nodes)) {
  require(nodes >= 2, "max flow: need at least two nodes");
}

int MaxFlow::add_arc(int from, int to, double capacity, double flow) {
  require(capacity >= 0.0 && flow >= 0.0 && flow <= capacity, "max flow: bad arc capacity or flow");
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({to, capacity, flow});
  arcs_.push_back({from, 0.0, -flow});
  out_[from].push_back(id);
  out_[to].push_back(id + 1);
  eps_ = std::max(eps_, 1e-12 * capacity);
  return id;
}

bool MaxFlow::bfs(int s, int t) {
  level_.assign(out_.size(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int id : out_[v]) {
      const Arc& a = arcs_[id];
      if (level_[a.to] < 0 && a.cap - a.flow > eps_) {
        level_[a.to] = level_[v] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[t] >= 0;
}

double MaxFlow::dfs(int v, int t, double pushed) {
  if (v == t) return pushed;
  for (auto& i = next_[v]; i < out_[v].size(); ++i) {
    const int id = out_[v][i];
    Arc& a = arcs_[id];
    if (level_[a.to] != level_[v] + 1 || a.cap - a.flow <= eps_) continue;
    const double got = dfs(a.to, t, std::min(pushed, a.cap - a.flow));
    if (got > 0.0) {
      a.flow += got;
      arcs_[id ^ 1].flow -= got;
      return got;
    }
  }
  return 0.0;
}

double MaxFlow::run(int source, int sink) {
  while (bfs(source, sink)) {
    next_.assign(out_.size(), 0);
    while (dfs(source, sink, std::numeric_limits<double>::infinity()) > 0.0) {
    }
  }
  double total = 0.0;
  for (int id : out_[source]) {
    if ((id & 1) == 0) total += arcs_[id].flow;
  }
  return total;
}

}  // namespace p2pshare
