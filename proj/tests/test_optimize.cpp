#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "p2pshare/error.hpp"
#include "p2pshare/optimize.hpp"

using namespace p2pshare;

namespace {

GraphPtr toy_b() { return share(Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}})); }
GraphPtr triangle() { return share(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}})); }
GraphPtr cycle4() { return share(Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})); }
GraphPtr k4() { return share(Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})); }
GraphPtr star4() { return share(Graph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})); }

GraphPtr circulant(int n, int half_degree) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int k = 1; k <= half_degree; ++k) e.emplace_back(i, (i + k) % n);
  return share(Graph::from_edges(n, e));
}

GraphPtr random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) e.emplace_back(u, v);
  return share(Graph::from_edges(n, e));
}

// All graphs on 4 nodes plus random 5- and 6-node graphs, each with at most 6 edges.
std::vector<GraphPtr> small_family() {
  std::vector<GraphPtr> out;
  const std::vector<Edge> pairs{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (int mask = 0; mask < 64; ++mask) {
    std::vector<Edge> e;
    for (int k = 0; k < 6; ++k)
      if (mask >> k & 1) e.push_back(pairs[k]);
    out.push_back(share(Graph::from_edges(4, e)));
  }
  std::mt19937_64 rng(8);
  while (out.size() < 100) {
    auto g = random_graph(5 + static_cast<int>(out.size() % 2), 0.35, rng);
    if (g->edge_count() <= 6) out.push_back(g);
  }
  return out;
}

// Exhaustive search over magnitudes in multiples of gcd(s, gamma) / 2 (the
// capacitated fractional matching polytope is half-integral in those units).
// Returns the best objective using at most max_support nonzero edges.
double grid_oracle(const Graph& g, double s, double gamma, std::size_t max_support = 99) {
  const double unit = std::gcd(static_cast<long>(s), static_cast<long>(gamma)) / 2.0;
  const int steps = static_cast<int>(std::lround(gamma / unit));
  const std::size_t E = g.edge_count();
  std::vector<double> load(static_cast<std::size_t>(g.node_count()), 0.0);
  double best = 0.0;
  auto rec = [&](auto&& self, std::size_t e, double total, std::size_t used) -> void {
    if (e == E) {
      best = std::max(best, total);
      return;
    }
    const auto [u, v] = g.edge(e);
    for (int k = 0; k <= steps; ++k) {
      const double x = k * unit;
      if (k > 0 && used >= max_support) break;
      if (load[u] + x > s + 1e-9 || load[v] + x > s + 1e-9) break;
      load[u] += x;
      load[v] += x;
      self(self, e + 1, total + x, used + (k > 0));
      load[u] -= x;
      load[v] -= x;
    }
  };
  rec(rec, 0, 0.0, 0);
  return best;
}

void check_feasible(const EngagementSolution& sol, double s, double gamma) {
  const auto& eng = sol.engagement;
  for (double m : eng.magnitudes()) {
    CHECK(m >= -1e-12);
    CHECK(m <= gamma + 1e-9);
  }
  for (int i = 0; i < eng.graph().node_count(); ++i) CHECK(eng.coverage(i) <= s + 1e-9);
  CHECK(std::abs(eng.total() - sol.objective) <= 1e-7);
}

LpProblem problem(GraphPtr g, double s, double gamma) {
  LpProblem p;
  p.graph = std::move(g);
  p.gamma = gamma;
  p.capacity = s;
  return p;
}

// Dykstra projection of the origin onto {A u = 1} intersected with the box,
// in coordinates u = (a, sqrt(2) w) where the objective is |u|^2.
double dykstra_oracle(const Graph& g, double s, double gamma) {
  const int n = g.node_count();
  const std::size_t E = g.edge_count();
  const std::size_t N = static_cast<std::size_t>(n) + E;
  const double r = 1.0 / std::sqrt(2.0);
  const double c = gamma / s;
  // A A^T = I + (D + Adj) / 2, inverted by Gauss-Jordan.
  std::vector<std::vector<double>> M(n, std::vector<double>(2 * n, 0.0));
  for (int i = 0; i < n; ++i) {
    M[i][i] = 1.0 + 0.5 * g.degree(i);
    M[i][n + i] = 1.0;
    for (int j : g.neighbors(i)) M[i][j] += 0.5;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col; i < n; ++i)
      if (std::abs(M[i][col]) > std::abs(M[piv][col])) piv = i;
    std::swap(M[col], M[piv]);
    const double d = M[col][col];
    for (auto& x : M[col]) x /= d;
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = M[i][col];
      for (int k = 0; k < 2 * n; ++k) M[i][k] -= f * M[col][k];
    }
  }
  auto apply_A = [&](const std::vector<double>& u) {
    std::vector<double> out(u.begin(), u.begin() + n);
    for (std::size_t e = 0; e < E; ++e) {
      out[g.edge(e).first] += r * u[n + e];
      out[g.edge(e).second] += r * u[n + e];
    }
    return out;
  };
  auto project_affine = [&](std::vector<double> u) {
    auto res = apply_A(u);
    for (auto& x : res) x -= 1.0;
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) y[i] += M[i][n + k] * res[k];
    for (int i = 0; i < n; ++i) u[i] -= y[i];
    for (std::size_t e = 0; e < E; ++e) u[n + e] -= r * (y[g.edge(e).first] + y[g.edge(e).second]);
    return u;
  };
  auto project_box = [&](std::vector<double> u) {
    for (int i = 0; i < n; ++i) u[i] = std::clamp(u[i], 0.0, 1.0);
    for (std::size_t e = 0; e < E; ++e) u[n + e] = std::clamp(u[n + e], 0.0, std::sqrt(2.0) * c);
    return u;
  };
  std::vector<double> x(N, 0.0), p(N, 0.0), q(N, 0.0);
  for (int it = 0; it < 200000; ++it) {
    std::vector<double> t(N);
    for (std::size_t k = 0; k < N; ++k) t[k] = x[k] + p[k];
    auto y = project_affine(t);
    for (std::size_t k = 0; k < N; ++k) p[k] = t[k] - y[k];
    for (std::size_t k = 0; k < N; ++k) t[k] = y[k] + q[k];
    auto z = project_box(t);
    for (std::size_t k = 0; k < N; ++k) q[k] = t[k] - z[k];
    double change = 0.0;
    for (std::size_t k = 0; k < N; ++k) change = std::max(change, std::abs(z[k] - x[k]));
    x = z;
    if (change < 1e-13) break;
  }
  double obj = 0.0;
  for (double v : x) obj += v * v;
  return obj;
}

void check_qp_invariants(const Graph& g, const QpShares& q, double s, double gamma) {
  const int n = g.node_count();
  std::vector<double> sum(q.self_share.begin(), q.self_share.end());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    CHECK(q.edge_share[e] >= 0.0);
    CHECK(q.edge_share[e] * s <= gamma + 1e-9);
    sum[g.edge(e).first] += q.edge_share[e];
    sum[g.edge(e).second] += q.edge_share[e];
  }
  for (int i = 0; i < n; ++i) {
    CHECK(q.self_share[i] >= 0.0);
    CHECK(q.self_share[i] <= 1.0);
    CHECK(std::abs(sum[i] - 1.0) <= 1e-6);
  }
  CHECK(q.objective <= n + 1e-9);
  CHECK(q.objective == doctest::Approx(qp_objective(q.self_share, q.edge_share)));
}

}  // namespace

TEST_SUITE("optimize") {
  TEST_CASE("max flow on a small network") {
    MaxFlow f(4);
    f.add_arc(0, 1, 3);
    f.add_arc(0, 2, 2);
    const int a = f.add_arc(1, 2, 5);
    f.add_arc(1, 3, 2);
    f.add_arc(2, 3, 3);
    CHECK(f.run(0, 3) == doctest::Approx(5.0));
    CHECK(f.flow(a) >= 0.0);
  }

  TEST_CASE("clipped sum root") {
    std::vector<ClipTerm> t{{0, 1, 1}, {1, 1, 1}};
    // clip(t, 0, 1) + clip(t + 1, 0, 1) = 1 at t = 0.
    CHECK(solve_clip_sum(t, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(solve_clip_sum(t, 1.5) == doctest::Approx(0.5));
    CHECK(solve_clip_sum(t, 2.0) == doctest::Approx(1.0));
  }

  TEST_CASE("simplex on a textbook program") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
    auto r = simplex_maximize({{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5});
    CHECK(r.bounded);
    CHECK(r.objective == doctest::Approx(36.0));
    CHECK(r.x[0] == doctest::Approx(2.0));
    CHECK(r.x[1] == doctest::Approx(6.0));
  }

  TEST_CASE("LP examples") {
    auto toy = solve_engagement_lp(problem(toy_b(), 100, 50));
    CHECK(toy.objective == doctest::Approx(150.0).epsilon(1e-9));
    check_feasible(toy, 100, 50);
    auto again = solve_engagement_lp(problem(toy_b(), 100, 50));
    CHECK(std::equal(toy.engagement.magnitudes().begin(), toy.engagement.magnitudes().end(),
                     again.engagement.magnitudes().begin()));

    auto k3 = solve_engagement_lp(problem(triangle(), 100, 50));
    CHECK(k3.objective == doctest::Approx(150.0));
    for (double m : k3.engagement.magnitudes()) CHECK(m == doctest::Approx(50.0));
    for (int i = 0; i < 3; ++i) CHECK(node_coverage(k3.engagement, i) == doctest::Approx(100.0));

    auto one = solve_engagement_lp(problem(share(Graph::from_edges(2, {{0, 1}})), 100, 50));
    CHECK(one.objective == doctest::Approx(50.0));
    CHECK(node_coverage(one.engagement, 0) == doctest::Approx(50.0));
    CHECK(node_coverage(one.engagement, 1) == doctest::Approx(50.0));
    CHECK(node_coverage(EngagementMap::zeros(toy_b()), 2) == 0.0);
    CHECK_THROWS_AS(node_coverage(one.engagement, 5), Error);
  }

  TEST_CASE("LP saturates a regular graph") {
    auto g = circulant(40, 3);
    auto sol = solve_engagement_lp(problem(g, 120, 20));
    check_feasible(sol, 120, 20);
    for (int i = 0; i < 40; ++i) CHECK(node_coverage(sol.engagement, i) == doctest::Approx(120.0));
  }

  TEST_CASE("LP matches the grid oracle on all small graphs") {
    for (auto [s, gamma] : {std::pair{100.0, 50.0}, std::pair{100.0, 30.0}, std::pair{4.0, 1.0}}) {
      for (const auto& g : small_family()) {
        auto sol = solve_engagement_lp(problem(g, s, gamma));
        check_feasible(sol, s, gamma);
        CHECK(std::abs(sol.objective - grid_oracle(*g, s, gamma)) <= 1e-6);
        CHECK(std::abs(engagement_lp_value(problem(g, s, gamma)) - sol.objective) <= 1e-7);
      }
    }
  }

  TEST_CASE("LP matches the dense simplex on random graphs") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 40; ++t) {
      auto g = random_graph(10, 0.4, rng);
      const double s = 50 + 100 * u(rng), gamma = 5 + 60 * u(rng);
      auto p = problem(g, s, gamma);
      auto sol = solve_engagement_lp(p);
      check_feasible(sol, s, gamma);
      CHECK(sol.objective == doctest::Approx(engagement_lp_value_simplex(p)).epsilon(1e-9));
    }
  }

  TEST_CASE("stage-2 residual capacities") {
    auto p = problem(triangle(), 100, 50);
    p.residual = {10, 100, 100};
    auto sol = solve_engagement_lp(p);
    CHECK(sol.objective == doctest::Approx(60.0));
    CHECK(node_coverage(sol.engagement, 0) <= 10 + 1e-9);
    p.residual = {10, 200, 100};
    CHECK_THROWS_AS(p.validate(), Error);
  }

  TEST_CASE("sparse MIP examples") {
    auto toy = solve_sparse_mip(problem(toy_b(), 100, 50), 2);
    CHECK(toy.exact);
    CHECK(toy.objective == doctest::Approx(100.0));
    CHECK(toy.engagement.support_size(1e-12) <= 2);
    auto path = solve_sparse_mip(problem(share(Graph::from_edges(3, {{0, 1}, {1, 2}})), 100, 50), 1);
    CHECK(path.objective == doctest::Approx(50.0));
    auto full = solve_sparse_mip(problem(toy_b(), 100, 50), 10);
    CHECK(full.objective == doctest::Approx(150.0));
    CHECK(solve_sparse_mip(problem(toy_b(), 100, 50), 0).objective == 0.0);
  }

  TEST_CASE("sparse MIP is optimal over every support size") {
    auto family = small_family();
    for (std::size_t k = 0; k < family.size(); k += 3) {
      const auto& g = family[k];
      for (std::size_t m = 1; m <= g->edge_count(); ++m) {
        auto sol = solve_sparse_mip(problem(g, 100, 30), m);
        CHECK(sol.exact);
        CHECK(sol.engagement.support_size(1e-12) <= m);
        check_feasible(sol, 100, 30);
        CHECK(std::abs(sol.objective - grid_oracle(*g, 100, 30, m)) <= 1e-6);
      }
    }
  }

  TEST_CASE("sparse heuristic above the exact limit") {
    auto g = circulant(20, 2);
    REQUIRE(g->edge_count() > kExactMipEdgeLimit);
    auto lp = solve_engagement_lp(problem(g, 100, 30));
    auto sol = solve_sparse_mip(problem(g, 100, 30), 12);
    CHECK_FALSE(sol.exact);
    CHECK(sol.engagement.support_size(1e-12) <= 12);
    CHECK(sol.objective <= lp.objective + 1e-9);
    CHECK(sol.objective >= 12 * 30 * 0.5);
    check_feasible(sol, 100, 30);
  }

  TEST_CASE("QP closed forms") {
    auto iso = solve_min_variance_qp(Graph::from_edges(1, {}), 100, 50);
    CHECK(iso.self_share[0] == 1.0);
    CHECK(iso.objective == 1.0);

    auto full = solve_min_variance_qp(*k4(), 100, 100.0 / 3);
    check_qp_invariants(*k4(), full, 100, 100.0 / 3);
    CHECK(full.objective == doctest::Approx(1.0).epsilon(1e-6));
    for (double a : full.self_share) CHECK(a == doctest::Approx(0.25).epsilon(1e-6));

    auto c4 = solve_min_variance_qp(*cycle4(), 100, 50);
    check_qp_invariants(*cycle4(), c4, 100, 50);
    CHECK(c4.objective == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
    for (double w : c4.edge_share) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

    auto none = solve_min_variance_qp(*cycle4(), 100, 0);
    CHECK(none.objective == 4.0);
  }

  TEST_CASE("QP agrees with a Dykstra projection oracle") {
    auto family = small_family();
    for (std::size_t k = 0; k < family.size(); k += 4) {
      const auto& g = family[k];
      for (double gamma : {10.0, 30.0, 60.0}) {
        auto q = solve_min_variance_qp(*g, 100, gamma);
        check_qp_invariants(*g, q, 100, gamma);
        CHECK(std::abs(q.objective - dykstra_oracle(*g, 100, gamma)) <= 1e-6);
      }
    }
  }

  TEST_CASE("QP objective never increases when an edge is added") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
      auto g = random_graph(8, 0.4, rng);
      if (g->edge_count() < 2) continue;
      std::vector<Edge> fewer(g->edges().begin() + 1, g->edges().end());
      auto h = Graph::from_edges(8, fewer);
      auto with = solve_min_variance_qp(*g, 100, 25);
      auto without = solve_min_variance_qp(h, 100, 25);
      CHECK(with.objective <= without.objective + 1e-7);
      check_qp_invariants(*g, with, 100, 25);
    }
  }

  TEST_CASE("two-stage on a star") {
    auto r = solve_two_stage(star4(), 100, 25, 10);
    for (double m : r.stage1.engagement.magnitudes()) CHECK(m == doctest::Approx(25.0));
    CHECK(r.eligible == std::vector<int>{1, 2, 3, 4});
    CHECK(r.fof_graph->edge_count() == 6);
    for (int leaf = 1; leaf <= 4; ++leaf) {
      CHECK(node_coverage(r.stage2.engagement, leaf) == doctest::Approx(30.0));
      CHECK(node_coverage(r.stage1.engagement, leaf) + node_coverage(r.stage2.engagement, leaf) ==
            doctest::Approx(55.0));
    }
    CHECK(r.stage2.stage == 2);
    auto zero = solve_two_stage(star4(), 100, 25, 0);
    CHECK(zero.stage2.engagement.total() == 0.0);
  }

  TEST_CASE("two-stage on a regular graph has nothing left to do") {
    auto r = solve_two_stage(circulant(30, 3), 60, 10, 10);
    CHECK(r.eligible.empty());
    CHECK(r.fof_graph->edge_count() == 0);
    CHECK(r.stage2.engagement.total() == 0.0);
  }

  TEST_CASE("two-stage with a self layer leaves room for z") {
    auto r = solve_two_stage(star4(), 100, 25, 10, 40);
    for (int i = 0; i < 5; ++i) {
      CHECK(node_coverage(r.stage1.engagement, i) + node_coverage(r.stage2.engagement, i) <= 60 + 1e-9);
    }
  }
}
