#include <cmath>

#include <boost/math/distributions/binomial.hpp>

#include "p2pshare/analytics.hpp"
#include "p2pshare/error.hpp"

namespace p2pshare {

FairnessReport fairness_exact(int dbar, double p) {
  if (dbar < 1) fail(ErrorCode::domain, "fairness: dbar must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::domain, "fairness: p must lie in [0, 1]");
  using boost::math::binomial_distribution;
  const binomial_distribution<double> own(dbar, p);
  const binomial_distribution<double> other(dbar - 1, p);
  // P[M >= k] for M ~ Bin(dbar - 1, p).
  auto at_least = [&](int k) {
    if (k <= 0) return 1.0;
    if (k > dbar - 1) return 0.0;
    return boost::math::cdf(boost::math::complement(other, k - 1));
  };
  FairnessReport r;
  r.p_zero = std::pow(1.0 - p, dbar);
  r.p_full = std::pow(p, dbar);
  for (int a = 0; a <= dbar; ++a) {
    const double w = boost::math::pdf(own, a);
    r.p_strict += w * at_least(a);
    r.p_weak += w * at_least(a - 1);
  }
  r.p_strict = std::min(1.0, r.p_strict);
  r.p_weak = std::min(1.0, r.p_weak);
  return r;
}

}  // namespace p2pshare
