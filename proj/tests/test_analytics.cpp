#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "p2pshare/analytics.hpp"
#include "p2pshare/error.hpp"

using namespace p2pshare;

namespace {

struct McFairness {
  double p_zero, p_strict, p_weak;
};

// Direct simulation of a claimant's neighbor count against a neighbor's.
McFairness fairness_mc(int dbar, double p, int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::binomial_distribution<int> n_i(dbar, p), m_j(dbar - 1, p);
  long zero = 0, strict = 0, weak = 0;
  for (int k = 0; k < draws; ++k) {
    const int a = n_i(rng);
    const int b = 1 + m_j(rng);
    zero += a == 0;
    strict += a < b;
    weak += a <= b;
  }
  return {double(zero) / draws, double(strict) / draws, double(weak) / draws};
}

bool within_4se(double exact, double estimate, int draws) {
  const double se = std::sqrt(std::max(exact * (1 - exact), 1e-12) / draws);
  return std::abs(exact - estimate) <= 4 * se + 1e-12;
}

SweepConfig small_config() {
  return SweepConfig::parse(
      "n = 300\n"
      "dbar = 10\n"
      "min_degree = 3\n"
      "sigmas = 0, 8\n"
      "seeds = 2\n"
      "seed = 17\n"
      "p = 0.1\n"
      "severity = gamma:100,1000,2000\n"
      "s = 1000\n"
      "gamma = nominal\n"
      "mechanisms = none, uniform, uniform_self(200), lp, qp, fof(100,50)\n"
      "min_reps = 5\n"
      "max_reps = 20\n"
      "rel_se = 0.05\n");
}

}  // namespace

TEST_SUITE("analytics") {
  TEST_CASE("fairness at the reference point") {
    auto f = fairness_exact(20, 0.1);
    CHECK(std::abs(f.p_zero - std::pow(0.9, 20)) <= 1e-12);
    CHECK(std::abs(f.p_zero - 0.1216) <= 0.0001);
    CHECK(std::abs(f.p_strict - 0.59) <= 0.005);
    CHECK(std::abs(f.p_weak - 0.78) <= 0.005);
    CHECK(f.p_full == doctest::Approx(std::pow(0.1, 20)));
    CHECK(f.p_strict <= f.p_weak);
  }

  TEST_CASE("fairness degenerate cases") {
    auto none = fairness_exact(7, 0.0);
    CHECK(none.p_zero == 1.0);
    CHECK(none.p_strict == 1.0);
    CHECK(none.p_weak == 1.0);
    auto all = fairness_exact(1, 1.0);
    CHECK(all.p_zero == 0.0);
    CHECK(all.p_full == 1.0);
    CHECK_THROWS_AS(fairness_exact(0, 0.1), Error);
    CHECK_THROWS_AS(fairness_exact(5, 1.1), Error);
  }

  TEST_CASE("fairness agrees with Monte Carlo") {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> d(1, 40);
    std::uniform_real_distribution<double> p(0.01, 0.6);
    const int draws = 1000000;
    for (int t = 0; t < 20; ++t) {
      const int dbar = d(rng);
      const double prob = p(rng);
      auto exact = fairness_exact(dbar, prob);
      auto mc = fairness_mc(dbar, prob, draws, 1000 + t);
      CHECK(within_4se(exact.p_zero, mc.p_zero, draws));
      CHECK(within_4se(exact.p_strict, mc.p_strict, draws));
      CHECK(within_4se(exact.p_weak, mc.p_weak, draws));
    }
  }

  TEST_CASE("summaries") {
    auto c = summarize({{3, 3}, {3, 3, 3}});
    CHECK(c.mean == 3.0);
    CHECK(c.stdev == 0.0);
    CHECK(c.share_self == 1.0);
    auto two = summarize({{0, 100}, {100, 0}});
    CHECK(two.mean == 50.0);
    CHECK(two.stdev == doctest::Approx(50.0));
    auto shares = summarize({{1}}, 10, 30, 60);
    CHECK(shares.share_self == doctest::Approx(0.1));
    CHECK(shares.share_friends == doctest::Approx(0.3));
    CHECK(shares.share_fof == doctest::Approx(0.6));
    CHECK_THROWS_AS(summarize(std::vector<std::vector<double>>{}), Error);
  }

  TEST_CASE("streaming summary matches two-pass recomputation") {
    auto g = share(Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}}));
    LossModel loss{0.3, Severity::uniform(0, 200), 100};
    Rng rng = make_stream({9});
    SummaryAccumulator acc;
    std::vector<std::vector<double>> all;
    double self = 0, friends = 0;
    for (int rep = 0; rep < 2000; ++rep) {
      auto claims = sample_claims(loss, 4, rng);
      auto r = settle_uniform(*g, claims, 100, 50);
      acc.add_settlement(r);
      all.push_back(r.xi);
      for (int i = 0; i < 4; ++i) {
        self += r.layers.self_first[i] + r.layers.residual_self[i];
        friends += r.layers.friends_received[i];
      }
    }
    auto a = summarize(acc);
    auto b = summarize(all, self, friends, 0.0);
    double sum = 0, sq = 0, count = 0;
    for (const auto& row : all)
      for (double v : row) sum += v, count += 1;
    const double mean = sum / count;
    for (const auto& row : all)
      for (double v : row) sq += (v - mean) * (v - mean);
    CHECK(a.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(a.stdev == doctest::Approx(std::sqrt(sq / count)).epsilon(1e-10));
    CHECK(b.stdev == doctest::Approx(a.stdev).epsilon(1e-10));
    CHECK(a.share_self == doctest::Approx(b.share_self).epsilon(1e-10));
    CHECK(a.share_self + a.share_friends + a.share_fof == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("mechanism grammar") {
    CHECK(Mechanism::parse("none").kind == Mechanism::Kind::none);
    auto us = Mechanism::parse("uniform_self(40)");
    CHECK(us.kind == Mechanism::Kind::uniform_self);
    CHECK(us.z == 40.0);
    CHECK(us.tag() == "uniform_self");
    auto lpz = Mechanism::parse("lp(25)");
    CHECK(lpz.kind == Mechanism::Kind::lp);
    CHECK(lpz.z == 25.0);
    auto f = Mechanism::parse("fof(50,20,10)");
    CHECK(f.gamma1 == 50.0);
    CHECK(f.gamma2 == 20.0);
    CHECK(f.z == 10.0);
    CHECK(f.tag() == "fof:50:20");
    CHECK(Mechanism::parse(f.to_string()).tag() == f.tag());
    CHECK_THROWS_AS(Mechanism::parse("uniform_self"), Error);
    CHECK_THROWS_AS(Mechanism::parse("magic"), Error);
    CHECK_THROWS_AS(Mechanism::parse("fof(1)"), Error);
  }

  TEST_CASE("gamma rules") {
    auto g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
    CHECK(GammaRule::parse("nominal").gamma(100, 20, g) == doctest::Approx(5.0));
    CHECK(GammaRule::parse("empirical").gamma(100, 20, g) == doctest::Approx(50.0));
    CHECK(GammaRule::parse("12.5").gamma(100, 20, g) == 12.5);
    CHECK_THROWS_AS(GammaRule::parse("sometimes"), Error);
  }

  TEST_CASE("config parsing") {
    auto c = small_config();
    CHECK(c.n == 300);
    CHECK(c.sigmas == std::vector<double>{0, 8});
    CHECK(c.mechanisms.size() == 6);
    CHECK(c.master_seed == 17);
    auto again = SweepConfig::parse(c.echo());
    CHECK(again.echo() == c.echo());
    CHECK(c.echo().find("workers") == std::string::npos);
    CHECK_THROWS_AS(SweepConfig::parse("colour = blue\n"), Error);
    CHECK_THROWS_AS(SweepConfig::parse("n = 10\nn = 20\n"), Error);
    CHECK_THROWS_AS(SweepConfig::parse("n = ten\n"), Error);
    CHECK_THROWS_AS(SweepConfig::parse("min_reps = 50\nmax_reps = 10\n"), Error);
  }

  TEST_CASE("sweep rows, ordering and CSV") {
    auto c = small_config();
    auto rows = run_sweep(c, 1);
    REQUIRE(rows.size() == 2 * 2 * 6);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const auto& a = rows[k - 1];
      const auto& b = rows[k];
      CHECK(std::tie(a.sigma, a.mechanism, a.self_contribution, a.seed) <
            std::tie(b.sigma, b.mechanism, b.self_contribution, b.seed));
    }
    for (const auto& r : rows) {
      CHECK(r.stdev_xi >= 0.0);
      CHECK(r.stdev_ratio == doctest::Approx(r.stdev_xi / 1000.0));
      CHECK(r.share_self + r.share_friends + r.share_fof == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(r.replications >= 5);
      CHECK(r.replications <= 20);
      if (r.mechanism == "none") CHECK(r.share_self == 1.0);
      if (r.mechanism != "fof:100:50") CHECK(r.share_fof == 0.0);
    }
    auto csv = sweep_csv(rows, csv_comment_header(c.echo()));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# p2pshare ", 0) == 0);
    while (std::getline(in, line) && line[0] == '#') {
    }
    CHECK(line == kSweepCsvHeader);
    int data = 0;
    while (std::getline(in, line)) ++data;
    CHECK(data == static_cast<int>(rows.size()));
    CHECK(csv.find('\r') == std::string::npos);
  }

  TEST_CASE("sweep output does not depend on the worker count") {
    auto c = small_config();
    const auto header = csv_comment_header(c.echo());
    const auto one = sweep_csv(run_sweep(c, 1), header);
    const auto three = sweep_csv(run_sweep(c, 3), header);
    CHECK(one == three);
    auto c2 = c;
    c2.master_seed = 18;
    CHECK(sweep_csv(run_sweep(c2, 2), header) != one);
  }

  TEST_CASE("common random numbers across mechanisms") {
    auto g = share(Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
    LossModel loss{0.2, Severity::point(100), 100};
    ReplicationPolicy policy{50, 50, 0.01};
    auto none = simulate(plan_mechanism(Mechanism::parse("none"), g, 100, GammaRule::parse("nominal"), 2), loss,
                         policy, {5});
    auto uni = simulate(plan_mechanism(Mechanism::parse("uniform"), g, 100, GammaRule::parse("nominal"), 2), loss,
                        policy, {5});
    // Sharing is conservative, so with the same claims the means coincide.
    CHECK(none.mean_xi == doctest::Approx(uni.mean_xi).epsilon(1e-12));
    CHECK(uni.stdev_xi < none.stdev_xi);
    CHECK(none.replications == 50);
  }
}
