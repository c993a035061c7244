#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "p2pshare/p2pshare.h"

namespace fs = std::filesystem;

namespace {

p2p_graph* make_graph(int n, std::vector<int> edges) {
  p2p_graph* g = nullptr;
  REQUIRE(p2p_graph_from_edges(n, edges.data(), edges.size() / 2, &g) == P2P_OK);
  return g;
}

p2p_claims* make_claims(std::vector<uint8_t> z, std::vector<double> y, double s) {
  p2p_claims* c = nullptr;
  REQUIRE(p2p_claims_from_losses(z.data(), y.data(), static_cast<int>(z.size()), s, &c) == P2P_OK);
  return c;
}

std::vector<double> xi_of(const p2p_settlement* r) {
  std::vector<double> xi(static_cast<std::size_t>(p2p_settlement_size(r)));
  REQUIRE(p2p_settlement_xi(r, xi.data()) == P2P_OK);
  return xi;
}

fs::path temp_dir() {
  auto d = fs::temp_directory_path() / ("p2pshare_capi_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("status strings and version") {
    CHECK(std::string(p2p_version()).size() > 0);
    CHECK(std::string(p2p_status_string(P2P_NOT_GRAPHICAL)).size() > 0);
  }

  TEST_CASE("graph round trip and errors") {
    p2p_graph* g = make_graph(4, {0, 1, 0, 2, 0, 3, 1, 2});
    CHECK(p2p_graph_node_count(g) == 4);
    CHECK(p2p_graph_edge_count(g) == 4);
    std::vector<int> deg(4);
    REQUIRE(p2p_graph_degrees(g, deg.data()) == P2P_OK);
    CHECK(deg == std::vector<int>{3, 2, 2, 1});
    const auto path = (temp_dir() / "g.json").string();
    REQUIRE(p2p_graph_save(g, path.c_str()) == P2P_OK);
    p2p_graph* h = nullptr;
    REQUIRE(p2p_graph_load(path.c_str(), &h) == P2P_OK);
    std::vector<int> e1(8), e2(8);
    p2p_graph_edges(g, e1.data());
    p2p_graph_edges(h, e2.data());
    CHECK(e1 == e2);
    p2p_graph_free(h);
    p2p_graph_free(g);

    int bad[] = {3, 3, 1, 1};
    size_t prefix = 99;
    CHECK(p2p_graph_realize(bad, 4, 1, 0, &h, &prefix) == P2P_NOT_GRAPHICAL);
    CHECK(prefix == 2);
    CHECK(std::strlen(p2p_last_error()) > 0);
    int loop[] = {0, 0};
    CHECK(p2p_graph_from_edges(2, loop, 1, &h) == P2P_INVALID_ARGUMENT);
    CHECK(p2p_graph_load("/nonexistent/g.json", &h) == P2P_IO);
    CHECK(p2p_graph_node_count(nullptr) == 0);
  }

  TEST_CASE("generation is seeded") {
    p2p_degree_spec spec;
    p2p_degree_spec_init(&spec);
    spec.mean_degree = 8;
    spec.degree_sd = 4;
    spec.min_degree = 2;
    p2p_graph *a = nullptr, *b = nullptr;
    REQUIRE(p2p_graph_generate(&spec, 200, 5, &a) == P2P_OK);
    REQUIRE(p2p_graph_generate(&spec, 200, 5, &b) == P2P_OK);
    REQUIRE(p2p_graph_edge_count(a) == p2p_graph_edge_count(b));
    std::vector<int> ea(2 * p2p_graph_edge_count(a)), eb(ea.size());
    p2p_graph_edges(a, ea.data());
    p2p_graph_edges(b, eb.data());
    CHECK(ea == eb);
    p2p_graph_free(a);
    p2p_graph_free(b);
  }

  TEST_CASE("loss model") {
    p2p_loss_model m;
    REQUIRE(p2p_loss_model_init(&m, 0.1, "uniform:0,200", 100) == P2P_OK);
    double mean = 0, sd = 0;
    REQUIRE(p2p_loss_moments(&m, &mean, &sd) == P2P_OK);
    CHECK(mean == doctest::Approx(7.5));
    CHECK(std::abs(sd - 24.71) <= 0.01);
    double below = 0;
    REQUIRE(p2p_below_deductible_fraction(&m, &below) == P2P_OK);
    CHECK(below == doctest::Approx(0.5));
    CHECK(p2p_loss_model_init(&m, 0.1, "weird:1", 100) == P2P_PARSE);
    p2p_claims* c = nullptr;
    REQUIRE(p2p_loss_model_init(&m, 0.1, "point:100", 100) == P2P_OK);
    REQUIRE(p2p_claims_sample(&m, 1000, 3, &c) == P2P_OK);
    CHECK(p2p_claims_size(c) == 1000);
    p2p_claims_free(c);
  }

  TEST_CASE("toy settlements") {
    p2p_graph* cyc = make_graph(4, {0, 1, 1, 2, 2, 3, 0, 3});
    p2p_graph* toy = make_graph(4, {0, 1, 0, 2, 0, 3, 1, 2});
    p2p_claims* bd = make_claims({0, 1, 0, 1}, {0, 200, 0, 60}, 100);
    p2p_claims* ab = make_claims({1, 1, 0, 0}, {60, 200, 0, 0}, 100);
    p2p_settlement* r = nullptr;
    REQUIRE(p2p_settle_uniform(cyc, bd, 100, 50, &r) == P2P_OK);
    CHECK(xi_of(r) == std::vector<double>{80, 0, 80, 0});
    const auto path = (temp_dir() / "settle.json").string();
    CHECK(p2p_settlement_save(r, path.c_str()) == P2P_OK);
    CHECK(p2p_settlement_total_in(r) == 160.0);
    p2p_settlement_free(r);
    REQUIRE(p2p_settle_uniform(toy, bd, 100, 50, &r) == P2P_OK);
    CHECK(xi_of(r) == std::vector<double>{100, 0, 50, 10});
    p2p_settlement_free(r);
    REQUIRE(p2p_settle_uniform(toy, ab, 100, 50, &r) == P2P_OK);
    CHECK(xi_of(r) == std::vector<double>{50, 20, 70, 20});
    std::vector<double> paid(4);
    REQUIRE(p2p_settlement_layer(r, P2P_LAYER_FRIENDS_PAID, paid.data()) == P2P_OK);
    CHECK(paid[2] == 70.0);
    p2p_settlement_free(r);
    REQUIRE(p2p_simulate_claims(cyc, bd, "uniform", "50", 2, &r) == P2P_OK);
    CHECK(xi_of(r) == std::vector<double>{80, 0, 80, 0});
    p2p_settlement_free(r);
    CHECK(p2p_settle_uniform_self(cyc, bd, 100, 120, 0, &r) == P2P_DOMAIN);
    p2p_claims_free(bd);
    p2p_claims_free(ab);
    p2p_graph_free(cyc);
    p2p_graph_free(toy);
  }

  TEST_CASE("optimizers") {
    p2p_graph* toy = make_graph(4, {0, 1, 0, 2, 0, 3, 1, 2});
    p2p_engagement* e = nullptr;
    REQUIRE(p2p_optimize_lp(toy, 100, 50, &e) == P2P_OK);
    CHECK(p2p_engagement_objective(e) == doctest::Approx(150.0));
    const auto path = (temp_dir() / "eng.json").string();
    REQUIRE(p2p_engagement_save(e, path.c_str()) == P2P_OK);
    p2p_engagement* back = nullptr;
    REQUIRE(p2p_engagement_load(toy, path.c_str(), &back) == P2P_OK);
    std::vector<double> m1(4), m2(4);
    p2p_engagement_magnitudes(e, m1.data());
    p2p_engagement_magnitudes(back, m2.data());
    CHECK(m1 == m2);
    p2p_engagement_free(back);
    p2p_engagement_free(e);
    REQUIRE(p2p_optimize_sparse(toy, 100, 50, 2, &e) == P2P_OK);
    CHECK(p2p_engagement_objective(e) == doctest::Approx(100.0));
    CHECK(p2p_engagement_exact(e) == 1);
    p2p_engagement_free(e);

    p2p_qp_shares* q = nullptr;
    p2p_graph* c4 = make_graph(4, {0, 1, 1, 2, 2, 3, 0, 3});
    REQUIRE(p2p_optimize_qp(c4, 100, 50, &q) == P2P_OK);
    CHECK(p2p_qp_objective(q) == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
    p2p_qp_free(q);

    p2p_graph* star = make_graph(5, {0, 1, 0, 2, 0, 3, 0, 4});
    p2p_engagement *s1 = nullptr, *s2 = nullptr;
    p2p_graph* fof = nullptr;
    REQUIRE(p2p_optimize_two_stage(star, 100, 25, 10, 0, &s1, &fof, &s2) == P2P_OK);
    CHECK(p2p_graph_edge_count(fof) == 6);
    double cov = 0;
    REQUIRE(p2p_engagement_coverage(s2, 1, &cov) == P2P_OK);
    CHECK(cov == doctest::Approx(30.0));
    p2p_claims* leaf = make_claims({0, 1, 0, 0, 0}, {0, 100, 0, 0, 0}, 100);
    p2p_settlement* r = nullptr;
    REQUIRE(p2p_settle_two_layer(s1, s2, leaf, 100, 0, &r) == P2P_OK);
    CHECK(xi_of(r)[1] == doctest::Approx(45.0));
    p2p_settlement_free(r);
    p2p_claims_free(leaf);
    p2p_engagement_free(s1);
    p2p_engagement_free(s2);
    p2p_graph_free(fof);
    p2p_graph_free(star);
    p2p_graph_free(c4);
    p2p_graph_free(toy);
  }

  TEST_CASE("fairness, simulation and sweep") {
    p2p_fairness f;
    REQUIRE(p2p_fairness_exact(20, 0.1, &f) == P2P_OK);
    CHECK(std::abs(f.p_zero - 0.1216) <= 1e-4);
    CHECK(p2p_fairness_exact(0, 0.1, &f) != P2P_OK);

    p2p_graph* cyc = make_graph(4, {0, 1, 1, 2, 2, 3, 0, 3});
    p2p_loss_model m;
    p2p_loss_model_init(&m, 0.1, "point:100", 100);
    p2p_report* rep = nullptr;
    REQUIRE(p2p_simulate(cyc, &m, "uniform", "nominal", 2, 20, 20, 0.01, 4, &rep) == P2P_OK);
    REQUIRE(p2p_report_rows(rep) == 1);
    int reps = 0;
    p2p_report_replications(rep, 0, &reps);
    CHECK(reps == 20);
    p2p_report_free(rep);
    CHECK(p2p_simulate(cyc, &m, "bogus", "nominal", 2, 20, 20, 0.01, 4, &rep) == P2P_PARSE);
    p2p_graph_free(cyc);

    const char* cfg = "n = 100\ndbar = 6\nmin_degree = 2\nsigmas = 0\nseed = 3\np = 0.1\n"
                      "severity = point:100\ns = 100\nmechanisms = none, uniform\nmin_reps = 3\nmax_reps = 5\n";
    p2p_report *a = nullptr, *b = nullptr;
    REQUIRE(p2p_sweep_run(cfg, 1, &a) == P2P_OK);
    REQUIRE(p2p_sweep_run(cfg, 2, &b) == P2P_OK);
    CHECK(std::string(p2p_report_csv(a)) == std::string(p2p_report_csv(b)));
    CHECK(p2p_report_rows(a) == 2);
    p2p_report_free(a);
    p2p_report_free(b);
    CHECK(p2p_sweep_run("bogus = 1\n", 1, &a) == P2P_PARSE);
  }

  TEST_CASE("ordering") {
    double d[] = {1, 0, 0, 0, .5, .5, 0, .5, .5};
    p2p_share_matrix* m = nullptr;
    REQUIRE(p2p_share_matrix_create(d, 3, &m) == P2P_OK);
    CHECK(std::string(p2p_share_matrix_classify(m, 1e-9)) == "doubly_stochastic");
    double x[] = {3, 1, 5}, out[3];
    REQUIRE(p2p_share_matrix_apply(m, x, out) == P2P_OK);
    CHECK(out[1] == 3.0);
    p2p_share_matrix_free(m);
    double neg[] = {1, -1, 0, 1};
    CHECK(p2p_share_matrix_create(neg, 2, &m) == P2P_DOMAIN);
    double xv[] = {0, 2}, xp[] = {.5, .5}, yv[] = {1}, yp[] = {1};
    const char* res = nullptr;
    REQUIRE(p2p_convex_order_compare(xv, xp, 2, yv, yp, 1, 1e-12, &res) == P2P_OK);
    CHECK(std::string(res) == "Y_below");
    double a[] = {3, 2, 2, 1}, b[] = {2, 2, 2, 2};
    int maj = 0;
    REQUIRE(p2p_majorizes(a, b, 4, 1e-9, &maj) == P2P_OK);
    CHECK(maj == 1);
  }
}
