#include <cmath>

#include "p2pshare/error.hpp"
#include "p2pshare/optimize.hpp"

namespace p2pshare {

SimplexResult simplex_maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                               const std::vector<double>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  require(b.size() == m, "simplex: b must have one entry per row");
  for (const auto& row : A) require(row.size() == n, "simplex: ragged constraint matrix");
  for (double v : b) require(v >= 0.0, "simplex: b must be >= 0");

  constexpr double eps = 1e-11;
  const std::size_t cols = n + m + 1;
  // Rows 0..m-1 are constraints, row m is the objective (reduced costs).
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1.0;
    T[i][cols - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) T[m][j] = -c[j];

  SimplexResult res;
  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (T[m][j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= eps) continue;
      const double ratio = T[i][cols - 1] / T[i][enter];
      if (leave == m || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) {
      res.bounded = false;
      return res;
    }
    const double piv = T[leave][enter];
    for (double& v : T[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = T[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = T[i][cols - 1];
  }
  res.objective = T[m][cols - 1];
  return res;
}

double engagement_lp_value_simplex(const LpProblem& problem) {
  problem.validate();
  const Graph& g = *problem.graph;
  const std::size_t m = g.edge_count();
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<std::vector<double>> A(n + m, std::vector<double>(m, 0.0));
  std::vector<double> b(n + m);
  for (std::size_t e = 0; e < m; ++e) {
    const auto [u, v] = g.edge(e);
    A[u][e] = 1.0;
    A[v][e] = 1.0;
    A[n + e][e] = 1.0;
    b[n + e] = problem.gamma;
  }
  for (std::size_t i = 0; i < n; ++i) b[i] = problem.node_capacity(static_cast<int>(i));
  const auto res = simplex_maximize(A, b, std::vector<double>(m, 1.0));
  return res.objective;
}

}  // namespace p2pshare
