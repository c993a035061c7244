#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "p2pshare/graph.hpp"
#include "p2pshare/loss_model.hpp"
#include "p2pshare/optimize.hpp"
#include "p2pshare/sharing.hpp"

namespace p2pshare {

/// Regular network, deterministic loss s, gamma = s / dbar, so a node's
/// post-sharing loss is gamma times the number of claiming neighbors.
struct FairnessReport {
  double p_zero = 0.0;    // P[xi = 0 | no claim]
  double p_full = 0.0;    // P[xi = s | claim]
  double p_strict = 0.0;  // P[xi_i < xi_j | i claims, j a neighbor]
  double p_weak = 0.0;    // P[xi_i <= xi_j | same]
};

FairnessReport fairness_exact(int dbar, double p);

/// Streaming pooled mean/variance (Welford) plus layer totals.
class SummaryAccumulator {
 public:
  void add(double v);
  void add(std::span<const double> values);
  void add_settlement(const SettlementResult& r);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const { return count_ > 0 ? m2_ / static_cast<double>(count_) : 0.0; }

  double paid_self = 0.0;
  double paid_friends = 0.0;
  double paid_fof = 0.0;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Summary {
  double mean = 0.0;
  double stdev = 0.0;
  double share_self = 1.0;
  double share_friends = 0.0;
  double share_fof = 0.0;
};

/// Population statistics over every entry; shares from the layer totals,
/// residual folded into the self share. share_self = 1 when nothing was paid.
Summary summarize(const std::vector<std::vector<double>>& xi, double paid_self = 0.0, double paid_friends = 0.0,
                  double paid_fof = 0.0);
Summary summarize(const SummaryAccumulator& acc);

struct Mechanism {
  enum class Kind { none, uniform, uniform_self, lp, qp, fof };
  Kind kind = Kind::none;
  double z = 0.0;
  double gamma1 = 0.0;  // fof only
  double gamma2 = 0.0;  // fof only

  /// none | uniform | uniform_self(z) | lp | lp(z) | qp | fof(g1,g2) | fof(g1,g2,z)
  static Mechanism parse(const std::string& text);
  /// CSV tag: z goes in its own column, so only fof carries parameters.
  std::string tag() const;
  std::string to_string() const;
};

/// How the engagement cap is chosen: s / dbar (nominal), s / mean degree of
/// the realized graph (empirical), or a fixed number.
struct GammaRule {
  enum class Kind { nominal, empirical, fixed };
  Kind kind = Kind::nominal;
  double value = 0.0;

  static GammaRule parse(const std::string& text);
  std::string to_string() const;
  double gamma(double deductible, double dbar, const Graph& graph) const;
};

struct SweepConfig {
  int n = 5000;
  double dbar = 20.0;
  int min_degree = 5;
  std::vector<double> sigmas{0.0};
  int seeds = 1;
  std::uint64_t master_seed = 0;
  LossModel loss;
  GammaRule gamma_rule;
  std::vector<Mechanism> mechanisms{Mechanism{}};
  int min_reps = 10;
  int max_reps = 500;
  double rel_se = 0.01;
  int workers = 0;  // 0 = hardware concurrency

  void validate() const;
  /// key = value lines (comments with #). Unknown keys are an error.
  static SweepConfig parse(const std::string& text);
  static SweepConfig load(const std::string& path);
  /// Canonical key = value echo; excludes settings that must not change the
  /// results (workers).
  std::string echo() const;
};

struct SweepRow {
  double sigma = 0.0;
  int seed = 0;
  std::string mechanism;
  double self_contribution = 0.0;
  double mean_xi = 0.0;
  double stdev_xi = 0.0;
  double stdev_ratio = 0.0;
  double share_self = 1.0;
  double share_friends = 0.0;
  double share_fof = 0.0;
  int replications = 0;
};

inline constexpr const char* kSweepCsvHeader =
    "sigma,seed,mechanism,self_contribution,mean_xi,stdev_xi,stdev_ratio,share_self,share_friends,share_fof";

/// Everything a mechanism needs that depends only on the graph.
struct MechanismPlan {
  Mechanism mechanism;
  GraphPtr graph;
  double deductible = 0.0;
  double gamma = 0.0;
  EngagementSolution lp;
  QpShares qp;
  TwoStageResult fof;

  SettlementResult settle(const ClaimSample& claims) const;
};

MechanismPlan plan_mechanism(const Mechanism& mechanism, const GraphPtr& graph, double deductible,
                             const GammaRule& rule, double dbar);

struct ReplicationPolicy {
  int min_reps = 10;
  int max_reps = 500;
  double rel_se = 0.01;
};

/// Replicates claims on a fixed graph until the pooled stdev's relative
/// standard error drops below rel_se. Claim streams are keyed by
/// (stream_keys..., replication) so mechanisms see common random numbers.
SweepRow simulate(const MechanismPlan& plan, const LossModel& loss, const ReplicationPolicy& policy,
                  const std::vector<std::uint64_t>& stream_keys);

/// Deterministic for a fixed config regardless of workers. Rows sorted by
/// (sigma, mechanism, z, seed).
std::vector<SweepRow> run_sweep(const SweepConfig& config, int workers = 0);

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& comment);

std::string csv_comment_header(const std::string& echo);

}  // namespace p2pshare
