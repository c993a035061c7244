#include "p2pshare/loss_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "p2pshare/error.hpp"
#include "p2pshare/serialize.hpp"

namespace p2pshare {
namespace {

std::vector<double> parse_numbers(std::string_view body, std::string_view spec) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    std::string_view token = body.substr(pos, comma == std::string_view::npos ? body.size() - pos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      fail(ErrorCode::parse, "severity spec '" + std::string(spec) + "': bad number '" + std::string(token) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double log_gamma_pdf(double u, double shape, double scale) {
  return (shape - 1.0) * std::log(u) - u / scale - std::lgamma(shape) - shape * std::log(scale);
}

}  // namespace

Severity Severity::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    fail(ErrorCode::parse, "severity spec '" + std::string(spec) + "': expected kind:params");
  }
  const std::string_view kind = spec.substr(0, colon);
  const auto nums = parse_numbers(spec.substr(colon + 1), spec);
  Severity sev;
  if (kind == "point" && nums.size() == 1) {
    sev = point(nums[0]);
  } else if (kind == "uniform" && nums.size() == 2) {
    sev = uniform(nums[0], nums[1]);
  } else if (kind == "gamma" && nums.size() == 3) {
    sev = shifted_gamma(nums[0], nums[1], nums[2]);
  } else {
    fail(ErrorCode::parse, "severity spec '" + std::string(spec) +
                               "': expected point:c, uniform:a,b or gamma:shift,mean,sd");
  }
  try {
    sev.validate();
  } catch (const Error& e) {
    fail(ErrorCode::parse, e.what());
  }
  return sev;
}

std::string Severity::to_string() const {
  switch (kind) {
    case Kind::point:
      return "point:" + format_double(a);
    case Kind::uniform:
      return "uniform:" + format_double(a) + "," + format_double(b);
    case Kind::shifted_gamma:
      return "gamma:" + format_double(a) + "," + format_double(b) + "," + format_double(c);
  }
  return {};
}

void Severity::validate() const {
  switch (kind) {
    case Kind::point:
      require(std::isfinite(a) && a >= 0.0, "severity: point value must be finite and >= 0");
      break;
    case Kind::uniform:
      require(std::isfinite(a) && std::isfinite(b) && a >= 0.0 && a < b,
              "severity: uniform needs 0 <= a < b");
      break;
    case Kind::shifted_gamma:
      require(std::isfinite(a) && a >= 0.0, "severity: gamma shift must be >= 0");
      require(std::isfinite(b) && b > a, "severity: gamma mean must exceed the shift");
      require(std::isfinite(c) && c > 0.0, "severity: gamma sd must be > 0");
      break;
  }
}

void LossModel::validate() const {
  require(claim_probability >= 0.0 && claim_probability <= 1.0, "loss model: p must lie in [0, 1]");
  require(std::isfinite(deductible) && deductible > 0.0, "loss model: deductible must be > 0");
  severity.validate();
}

double ClaimSample::total() const { return std::accumulate(x.begin(), x.end(), 0.0); }

ClaimSample ClaimSample::from_losses(std::vector<std::uint8_t> z, std::vector<double> y, double deductible) {
  require(z.size() == y.size(), "claims: Z and Y length mismatch");
  require(std::isfinite(deductible) && deductible > 0.0, "claims: deductible must be > 0");
  ClaimSample out;
  out.deductible = deductible;
  out.x.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    require(z[i] <= 1, "claims: Z must be 0 or 1");
    if (z[i] == 0) {
      y[i] = 0.0;
    } else {
      require(std::isfinite(y[i]) && y[i] >= 0.0, "claims: severity must be finite and >= 0");
    }
    out.x[i] = z[i] ? std::min(deductible, y[i]) : 0.0;
  }
  out.z = std::move(z);
  out.y = std::move(y);
  return out;
}

void sample_claims_into(const LossModel& model, Rng& rng, ClaimSample& out) {
  const double s = model.deductible;
  const auto& sev = model.severity;
  std::bernoulli_distribution claim(model.claim_probability);
  std::uniform_real_distribution<double> uni(sev.a, sev.kind == Severity::Kind::uniform ? sev.b : sev.a + 1.0);
  std::gamma_distribution<double> gam(sev.kind == Severity::Kind::shifted_gamma ? sev.gamma_shape() : 1.0,
                                      sev.kind == Severity::Kind::shifted_gamma ? sev.gamma_scale() : 1.0);
  out.deductible = s;
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    const bool z = claim(rng);
    double y = 0.0;
    if (z) {
      switch (sev.kind) {
        case Severity::Kind::point:
          y = sev.a;
          break;
        case Severity::Kind::uniform:
          y = uni(rng);
          break;
        case Severity::Kind::shifted_gamma:
          y = sev.a + gam(rng);
          break;
      }
    }
    out.z[i] = z ? 1 : 0;
    out.y[i] = y;
    out.x[i] = z ? std::min(s, y) : 0.0;
  }
}

ClaimSample sample_claims(const LossModel& model, int n, Rng& rng) {
  model.validate();
  require(n >= 1, "sample_claims: n must be >= 1");
  ClaimSample out;
  out.z.resize(static_cast<std::size_t>(n));
  out.y.resize(static_cast<std::size_t>(n));
  out.x.resize(static_cast<std::size_t>(n));
  sample_claims_into(model, rng, out);
  return out;
}

CappedSeverityMoments capped_severity_moments(const Severity& sev, double s) {
  sev.validate();
  require(s > 0.0, "deductible must be > 0");
  switch (sev.kind) {
    case Severity::Kind::point: {
      const double m = std::min(s, sev.a);
      return {m, m * m};
    }
    case Severity::Kind::uniform: {
      const double a = sev.a, b = sev.b;
      if (s <= a) return {s, s * s};
      if (s >= b) return {(a + b) / 2.0, (a * a + a * b + b * b) / 3.0};
      const double w = b - a;
      return {((s * s - a * a) / 2.0 + s * (b - s)) / w,
              ((s * s * s - a * a * a) / 3.0 + s * s * (b - s)) / w};
    }
    case Severity::Kind::shifted_gamma: {
      const double shift = sev.a;
      if (s <= shift) return {s, s * s};
      const double shape = sev.gamma_shape();
      const double scale = sev.gamma_scale();
      const double t = s - shift;
      const double tail = boost::math::gamma_q(shape, t / scale);
      boost::math::quadrature::tanh_sinh<double> integrator;
      auto integrate = [&](int power) {
        auto f = [&](double u) {
          if (u <= 0.0) return 0.0;
          return std::pow(shift + u, power) * std::exp(log_gamma_pdf(u, shape, scale));
        };
        double err = 0.0;
        double l1 = 0.0;
        const double value = integrator.integrate(f, 0.0, t, 1e-10, &err, &l1);
        if (!std::isfinite(value) || err > 1e-7 * std::max(1.0, std::abs(value))) {
          fail(ErrorCode::numeric, "loss_moments: quadrature did not converge (error estimate " +
                                       format_double(err) + ")");
        }
        return value;
      };
      return {integrate(1) + s * tail, integrate(2) + s * s * tail};
    }
  }
  return {};
}

LossMoments loss_moments(const LossModel& model) {
  model.validate();
  const double p = model.claim_probability;
  const auto m = capped_severity_moments(model.severity, model.deductible);
  const double mean = p * m.first;
  const double var = std::max(0.0, p * m.second - mean * mean);
  return {mean, std::sqrt(var)};
}

double below_deductible_fraction(const LossModel& model) {
  model.validate();
  const double s = model.deductible;
  const auto& sev = model.severity;
  switch (sev.kind) {
    case Severity::Kind::point:
      return sev.a <= s ? 1.0 : 0.0;
    case Severity::Kind::uniform:
      return std::clamp((s - sev.a) / (sev.b - sev.a), 0.0, 1.0);
    case Severity::Kind::shifted_gamma:
      if (s <= sev.a) return 0.0;
      return boost::math::gamma_p(sev.gamma_shape(), (s - sev.a) / sev.gamma_scale());
  }
  return 0.0;
}

}  // namespace p2pshare
