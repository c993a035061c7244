#include <cmath>

#include "p2pshare/analytics.hpp"
#include "p2pshare/error.hpp"

namespace p2pshare {
namespace {

void fill_shares(Summary& s, double self, double friends, double fof) {
  const double total = self + friends + fof;
  if (total <= 0.0) {
    s.share_self = 1.0;
    s.share_friends = 0.0;
    s.share_fof = 0.0;
    return;
  }
  s.share_friends = friends / total;
  s.share_fof = fof / total;
  s.share_self = 1.0 - s.share_friends - s.share_fof;
}

}  // namespace

void SummaryAccumulator::add(double v) {
  ++count_;
  const double d = v - mean_;
  mean_ += d / static_cast<double>(count_);
  m2_ += d * (v - mean_);
}

void SummaryAccumulator::add(std::span<const double> values) {
  for (double v : values) add(v);
}

void SummaryAccumulator::add_settlement(const SettlementResult& r) {
  add(r.xi);
  const auto& L = r.layers;
  for (std::size_t i = 0; i < r.xi.size(); ++i) {
    paid_self += L.self_first[i] + L.residual_self[i];
    paid_friends += L.friends_received[i];
    paid_fof += L.fof_received[i];
  }
}

Summary summarize(const std::vector<std::vector<double>>& xi, double paid_self, double paid_friends,
                  double paid_fof) {
  std::size_t count = 0;
  double sum = 0.0;
  for (const auto& row : xi) {
    for (double v : row) sum += v;
    count += row.size();
  }
  if (count == 0) fail(ErrorCode::domain, "summarize: empty input");
  Summary s;
  s.mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (const auto& row : xi) {
    for (double v : row) ss += (v - s.mean) * (v - s.mean);
  }
  s.stdev = std::sqrt(ss / static_cast<double>(count));
  fill_shares(s, paid_self, paid_friends, paid_fof);
  return s;
}

Summary summarize(const SummaryAccumulator& acc) {
  if (acc.count() == 0) fail(ErrorCode::domain, "summarize: empty input");
  Summary s;
  s.mean = acc.mean();
  s.stdev = std::sqrt(acc.variance());
  fill_shares(s, acc.paid_self, acc.paid_friends, acc.paid_fof);
  return s;
}

}  // namespace p2pshare
