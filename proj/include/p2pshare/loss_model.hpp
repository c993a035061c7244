#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "p2pshare/rng.hpp"

namespace p2pshare {

/// Claim-size law. All supported families have support in [0, inf).
struct Severity {
  enum class Kind { point, uniform, shifted_gamma };

  Kind kind = Kind::point;
  double a = 0.0;  // point: value; uniform: lower; gamma: shift
  double b = 0.0;  // uniform: upper; gamma: mean of Y (shift included)
  double c = 0.0;  // gamma: sd

  static Severity point(double value) { return {Kind::point, value, 0.0, 0.0}; }
  static Severity uniform(double lo, double hi) { return {Kind::uniform, lo, hi, 0.0}; }
  /// Y = shift + G with G ~ Gamma, E[Y] = mean and sd[Y] = sd.
  static Severity shifted_gamma(double shift, double mean, double sd) {
    return {Kind::shifted_gamma, shift, mean, sd};
  }

  /// Parses `point:c`, `uniform:a,b` or `gamma:shift,mean,sd`.
  static Severity parse(std::string_view spec);
  std::string to_string() const;

  double gamma_shape() const { return (b - a) * (b - a) / (c * c); }
  double gamma_scale() const { return c * c / (b - a); }

  void validate() const;
};

/// One claim or none per policyholder per period; capped at the deductible.
struct LossModel {
  double claim_probability = 0.1;
  Severity severity = Severity::point(100.0);
  double deductible = 100.0;

  void validate() const;
};

/// Claim indicators Z, severities Y (0 where Z = 0) and capped losses
/// X = Z * min{s, Y}.
struct ClaimSample {
  std::vector<std::uint8_t> z;
  std::vector<double> y;
  std::vector<double> x;
  double deductible = 0.0;

  std::size_t size() const noexcept { return x.size(); }
  double total() const;

  /// Builds a sample from given indicators and severities.
  static ClaimSample from_losses(std::vector<std::uint8_t> z, std::vector<double> y, double deductible);
};

ClaimSample sample_claims(const LossModel& model, int n, Rng& rng);

/// Redraws into an existing sample without reallocating.
void sample_claims_into(const LossModel& model, Rng& rng, ClaimSample& out);

struct LossMoments {
  double mean = 0.0;
  double stdev = 0.0;
};

/// Mean and standard deviation of X. Exact for point and uniform
/// severities; adaptive quadrature for the shifted Gamma.
LossMoments loss_moments(const LossModel& model);

/// P[Y <= s], the share of claims falling under the deductible.
double below_deductible_fraction(const LossModel& model);

/// E[min(s, Y)] and E[min(s, Y)^2] for the severity alone.
struct CappedSeverityMoments {
  double first = 0.0;
  double second = 0.0;
};
CappedSeverityMoments capped_severity_moments(const Severity& severity, double deductible);

}  // namespace p2pshare
