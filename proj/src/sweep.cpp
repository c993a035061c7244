#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "p2pshare/analytics.hpp"
#include "p2pshare/error.hpp"
#include "p2pshare/log.hpp"
#include "p2pshare/serialize.hpp"

namespace p2pshare {
namespace {

constexpr std::uint64_t kGraphStream = 0;
constexpr std::uint64_t kClaimStream = 1;

SettlementResult no_sharing(const ClaimSample& claims) {
  SettlementResult r;
  r.xi = claims.x;
  r.layers.resize(claims.size());
  r.layers.residual_self = claims.x;
  r.total_in = claims.total();
  return r;
}

double population_variance(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

}  // namespace

SettlementResult MechanismPlan::settle(const ClaimSample& claims) const {
  const Graph& g = *graph;
  switch (mechanism.kind) {
    case Mechanism::Kind::none:
      return no_sharing(claims);
    case Mechanism::Kind::uniform:
      return settle_uniform(g, claims, deductible, gamma);
    case Mechanism::Kind::uniform_self: {
      const double dbar = gamma > 0.0 ? deductible / gamma : std::numeric_limits<double>::infinity();
      return settle_uniform_with_self(g, claims, deductible, mechanism.z, dbar);
    }
    case Mechanism::Kind::lp:
      if (mechanism.z == 0.0) return settle_personalized(g, lp.engagement, claims, deductible);
      return settle_two_layer(g, lp.engagement, fof.fof_graph ? *fof.fof_graph : g, fof.stage2.engagement, claims,
                              deductible, mechanism.z);
    case Mechanism::Kind::qp:
      return settle_linear(g, qp.self_share, qp.edge_share, claims);
    case Mechanism::Kind::fof:
      return settle_two_layer(g, fof.stage1.engagement, *fof.fof_graph, fof.stage2.engagement, claims, deductible,
                              mechanism.z);
  }
  fail(ErrorCode::invalid_argument, "unknown mechanism");
}

MechanismPlan plan_mechanism(const Mechanism& mechanism, const GraphPtr& graph, double deductible,
                             const GammaRule& rule, double dbar) {
  require(graph != nullptr, "plan: null graph");
  MechanismPlan plan;
  plan.mechanism = mechanism;
  plan.graph = graph;
  plan.deductible = deductible;
  if (mechanism.z < 0.0 || mechanism.z > deductible) {
    fail(ErrorCode::domain, "mechanism " + mechanism.to_string() + ": self-contribution must lie in [0, s]");
  }
  switch (mechanism.kind) {
    case Mechanism::Kind::none:
      break;
    case Mechanism::Kind::uniform:
    case Mechanism::Kind::uniform_self:
      plan.gamma = rule.gamma(deductible, dbar, *graph);
      break;
    case Mechanism::Kind::lp:
      plan.gamma = rule.gamma(deductible, dbar, *graph);
      plan.lp = solve_engagement_lp({graph, plan.gamma, deductible - mechanism.z, {}});
      if (mechanism.z > 0.0) {
        auto empty = share(Graph::from_edges(graph->node_count(), {}));
        plan.fof.fof_graph = empty;
        plan.fof.stage2.engagement = EngagementMap::zeros(empty);
      }
      break;
    case Mechanism::Kind::qp:
      plan.gamma = rule.gamma(deductible, dbar, *graph);
      plan.qp = solve_min_variance_qp(*graph, deductible, plan.gamma);
      break;
    case Mechanism::Kind::fof:
      plan.fof = solve_two_stage(graph, deductible, mechanism.gamma1, mechanism.gamma2, mechanism.z);
      break;
  }
  return plan;
}

SweepRow simulate(const MechanismPlan& plan, const LossModel& loss, const ReplicationPolicy& policy,
                  const std::vector<std::uint64_t>& stream_keys) {
  loss.validate();
  require(policy.min_reps >= 1 && policy.max_reps >= policy.min_reps, "simulate: need 1 <= min_reps <= max_reps");
  require(policy.rel_se > 0.0, "simulate: rel_se must be > 0");
  require(loss.deductible == plan.deductible, "simulate: loss model and plan disagree on the deductible");
  const int n = plan.graph->node_count();
  ClaimSample claims;
  claims.z.resize(static_cast<std::size_t>(n));
  claims.y.resize(static_cast<std::size_t>(n));
  claims.x.resize(static_cast<std::size_t>(n));
  SummaryAccumulator acc;
  std::vector<double> rep_var;
  std::vector<std::uint64_t> keys = stream_keys;
  keys.push_back(0);
  int reps = 0;
  for (; reps < policy.max_reps;) {
    keys.back() = static_cast<std::uint64_t>(reps);
    Rng rng = make_stream_from(keys);
    sample_claims_into(loss, rng, claims);
    const auto r = plan.settle(claims);
    acc.add_settlement(r);
    rep_var.push_back(population_variance(r.xi));
    ++reps;
    if (reps < policy.min_reps) continue;
    double mv = 0.0;
    for (double v : rep_var) mv += v;
    mv /= reps;
    if (mv <= 0.0) break;
    double sv = 0.0;
    for (double v : rep_var) sv += (v - mv) * (v - mv);
    sv = reps > 1 ? std::sqrt(sv / (reps - 1)) : 0.0;
    // Relative SE of a standard deviation is half that of the variance.
    const double rel = 0.5 * sv / std::sqrt(static_cast<double>(reps)) / mv;
    if (rel < policy.rel_se) break;
  }
  const auto s = summarize(acc);
  SweepRow row;
  row.mechanism = plan.mechanism.tag();
  row.self_contribution = plan.mechanism.z;
  row.mean_xi = s.mean;
  row.stdev_xi = s.stdev;
  row.stdev_ratio = s.stdev / plan.deductible;
  row.share_self = s.share_self;
  row.share_friends = s.share_friends;
  row.share_fof = s.share_fof;
  row.replications = reps;
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config, int workers) {
  config.validate();
  struct Scenario {
    double sigma;
    int seed;
  };
  std::vector<Scenario> scenarios;
  for (double sigma : config.sigmas) {
    for (int seed = 0; seed < config.seeds; ++seed) scenarios.push_back({sigma, seed});
  }
  if (workers <= 0) workers = config.workers;
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(scenarios.size()));

  std::vector<std::vector<SweepRow>> results(scenarios.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const ReplicationPolicy policy{config.min_reps, config.max_reps, config.rel_se};

  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= scenarios.size()) return;
      {
        std::lock_guard lock(error_mutex);
        if (error) return;
      }
      try {
        const auto [sigma, seed] = scenarios[k];
        const std::uint64_t s64 = static_cast<std::uint64_t>(seed);
        Rng grng = make_stream({config.master_seed, key_of(sigma), s64, kGraphStream});
        const DegreeSpec spec{config.dbar, sigma, config.min_degree};
        auto graph = share(generate_graph(spec, config.n, grng));
        log::info("sweep: sigma " + format_double(sigma) + " seed " + std::to_string(seed) + ": " +
                  std::to_string(graph->edge_count()) + " edges");
        const std::vector<std::uint64_t> keys{config.master_seed, key_of(sigma), s64, kClaimStream};
        for (const auto& mech : config.mechanisms) {
          const auto plan = plan_mechanism(mech, graph, config.loss.deductible, config.gamma_rule, config.dbar);
          auto row = simulate(plan, config.loss, policy, keys);
          row.sigma = sigma;
          row.seed = seed;
          log::debug("sweep: " + row.mechanism + " z=" + format_double(row.self_contribution) + " reps " +
                     std::to_string(row.replications) + " stdev_ratio " + format_double(row.stdev_ratio));
          results[k].push_back(std::move(row));
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<SweepRow> rows;
  for (auto& r : results) {
    for (auto& row : r) rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.sigma, a.mechanism, a.self_contribution, a.seed) <
           std::tie(b.sigma, b.mechanism, b.self_contribution, b.seed);
  });
  return rows;
}

std::string csv_comment_header(const std::string& echo) {
  std::ostringstream out;
  out << "# p2pshare " << P2PSHARE_VERSION << "\n";
  std::istringstream in(echo);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out << "# " << line << "\n";
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& comment) {
  std::string out = comment;
  out += kSweepCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += format_double(r.sigma) + ',' + std::to_string(r.seed) + ',' + r.mechanism + ',' +
           format_double(r.self_contribution) + ',' + format_double(r.mean_xi) + ',' + format_double(r.stdev_xi) +
           ',' + format_double(r.stdev_ratio) + ',' + format_double(r.share_self) + ',' +
           format_double(r.share_friends) + ',' + format_double(r.share_fof) + '\n';
  }
  return out;
}

}  // namespace p2pshare
