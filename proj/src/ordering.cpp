#include "p2pshare/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "p2pshare/error.hpp"

namespace p2pshare {
namespace {

constexpr std::size_t kMaxEnumVars = 4;
constexpr std::size_t kMaxEnumAtoms = 5;

void check_enumerable(const ShareMatrix& m, const DiscreteDist& marginal) {
  if (m.size() > kMaxEnumVars || marginal.atoms().size() > kMaxEnumAtoms) {
    fail(ErrorCode::domain, "exact enumeration is limited to 4 variables with at most 5 atoms each");
  }
}

// Calls f(values, prob) for every joint outcome of n i.i.d. copies.
template <class F>
void enumerate_joint(std::size_t n, const DiscreteDist& marginal, F&& f) {
  const auto& atoms = marginal.atoms();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> vals(n);
  for (;;) {
    double p = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      vals[k] = atoms[idx[k]].first;
      p *= atoms[idx[k]].second;
    }
    f(vals, p);
    std::size_t k = 0;
    while (k < n && ++idx[k] == atoms.size()) idx[k++] = 0;
    if (k == n) break;
  }
}

std::vector<double> sorted_prefix(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  std::partial_sum(s.begin(), s.end(), s.begin());
  return s;
}

}  // namespace

DiscreteDist::DiscreteDist(std::vector<std::pair<double, double>> atoms) {
  double total = 0.0;
  for (const auto& [v, p] : atoms) {
    require(std::isfinite(v), "distribution: values must be finite");
    require(std::isfinite(p) && p >= 0.0, "distribution: probabilities must be >= 0");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-12 * std::max<std::size_t>(1, atoms.size()),
          "distribution: probabilities must sum to 1");
  std::sort(atoms.begin(), atoms.end());
  for (const auto& a : atoms) {
    if (a.second == 0.0) continue;
    if (!atoms_.empty() && atoms_.back().first == a.first) {
      atoms_.back().second += a.second;
    } else {
      atoms_.push_back(a);
    }
  }
  require(!atoms_.empty(), "distribution: no atoms");
}

double DiscreteDist::mean() const {
  double m = 0.0;
  for (const auto& [v, p] : atoms_) m += v * p;
  return m;
}

double DiscreteDist::variance() const {
  const double m = mean();
  double s = 0.0;
  for (const auto& [v, p] : atoms_) s += p * (v - m) * (v - m);
  return s;
}

double stop_loss(const DiscreteDist& dist, double t) {
  double s = 0.0;
  for (const auto& [v, p] : dist.atoms()) {
    if (v > t) s += p * (v - t);
  }
  return s;
}

std::string to_string(ConvexOrder order) {
  switch (order) {
    case ConvexOrder::equal:
      return "equal";
    case ConvexOrder::x_below:
      return "X_below";
    case ConvexOrder::y_below:
      return "Y_below";
    case ConvexOrder::incomparable:
      return "incomparable";
    case ConvexOrder::means_differ:
      return "means_differ";
  }
  return "?";
}

ConvexOrder convex_order_compare(const DiscreteDist& x, const DiscreteDist& y, double tol) {
  if (std::abs(x.mean() - y.mean()) > tol) return ConvexOrder::means_differ;
  bool x_le = true;
  bool y_le = true;
  auto check = [&](double t) {
    const double sx = stop_loss(x, t);
    const double sy = stop_loss(y, t);
    if (sx > sy + tol) x_le = false;
    if (sy > sx + tol) y_le = false;
  };
  for (const auto& a : x.atoms()) check(a.first);
  for (const auto& a : y.atoms()) check(a.first);
  if (x_le && y_le) return ConvexOrder::equal;
  if (x_le) return ConvexOrder::x_below;
  if (y_le) return ConvexOrder::y_below;
  return ConvexOrder::incomparable;
}

ShareMatrix::ShareMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  require(!rows_.empty(), "share matrix: empty");
  for (const auto& r : rows_) {
    require(r.size() == rows_.size(), "share matrix: must be square");
    for (double v : r) {
      require(std::isfinite(v), "share matrix: entries must be finite");
      if (v < 0.0) fail(ErrorCode::domain, "share matrix: negative entry");
    }
  }
}

ShareMatrix ShareMatrix::identity(std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
  return ShareMatrix(std::move(rows));
}

std::string to_string(MatrixClass cls) {
  switch (cls) {
    case MatrixClass::doubly_stochastic:
      return "doubly_stochastic";
    case MatrixClass::column_stochastic:
      return "column_stochastic";
    case MatrixClass::neither:
      return "neither";
  }
  return "?";
}

MatrixClass classify_matrix(const ShareMatrix& m, double tol) {
  const std::size_t n = m.size();
  bool cols = true;
  bool rows = true;
  for (std::size_t j = 0; j < n; ++j) {
    double c = 0.0;
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      c += m(i, j);
      r += m(j, i);
    }
    cols = cols && std::abs(c - 1.0) <= tol;
    rows = rows && std::abs(r - 1.0) <= tol;
  }
  if (cols && rows) return MatrixClass::doubly_stochastic;
  if (cols) return MatrixClass::column_stochastic;
  return MatrixClass::neither;
}

std::vector<double> apply_share(const ShareMatrix& m, std::span<const double> x, double tol) {
  require(x.size() == m.size(), "apply_share: vector length must match the matrix");
  if (classify_matrix(m, tol) == MatrixClass::neither) {
    fail(ErrorCode::domain, "apply_share: column sums must equal 1");
  }
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out[i] += m(i, j) * x[j];
  }
  return out;
}

ShareMatrix clique_share_matrix(std::span<const int> sizes) {
  require(!sizes.empty(), "clique_share_matrix: empty partition");
  std::size_t n = 0;
  for (int s : sizes) {
    require(s >= 1, "clique_share_matrix: block sizes must be >= 1");
    n += static_cast<std::size_t>(s);
  }
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  std::size_t start = 0;
  for (int s : sizes) {
    for (std::size_t i = start; i < start + s; ++i) {
      for (std::size_t j = start; j < start + s; ++j) rows[i][j] = 1.0 / s;
    }
    start += static_cast<std::size_t>(s);
  }
  return ShareMatrix(std::move(rows));
}

double clique_pool_variance(int n, std::span<const int> sizes, double var_x) {
  long long total = 0;
  double inv = 0.0;
  for (int s : sizes) {
    require(s >= 1, "clique_pool_variance: block sizes must be >= 1");
    total += s;
    inv += 1.0 / s;
  }
  require(n >= 1 && total == n, "clique_pool_variance: sizes must sum to n");
  return var_x * inv / n;
}

double trace_variance(const ShareMatrix& m, const std::vector<std::vector<double>>& sigma) {
  const std::size_t n = m.size();
  require(sigma.size() == n, "trace_variance: shape mismatch");
  for (const auto& r : sigma) require(r.size() == n, "trace_variance: shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      require(std::abs(sigma[i][j] - sigma[j][i]) <= 1e-12 * (1.0 + std::abs(sigma[i][j])),
              "trace_variance: covariance must be symmetric");
    }
  }
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) t += m(i, a) * sigma[a][b] * m(i, b);
    }
  }
  return t;
}

bool majorizes(std::span<const double> x, std::span<const double> y, double tol) {
  require(x.size() == y.size(), "majorizes: length mismatch");
  if (x.empty()) return true;
  const auto px = sorted_prefix(x);
  const auto py = sorted_prefix(y);
  if (std::abs(px.back() - py.back()) > tol) return false;
  for (std::size_t k = 0; k < px.size(); ++k) {
    if (px[k] > py[k] + tol) return false;
  }
  return true;
}

DiscreteDist share_component_distribution(const ShareMatrix& m, std::size_t row, const DiscreteDist& marginal) {
  check_enumerable(m, marginal);
  require(row < m.size(), "share_component_distribution: row out of range");
  std::vector<std::pair<double, double>> atoms;
  enumerate_joint(m.size(), marginal, [&](const std::vector<double>& x, double p) {
    double v = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) v += m(row, j) * x[j];
    atoms.emplace_back(v, p);
  });
  return DiscreteDist(std::move(atoms));
}

DiscreteDist share_picked_distribution(const ShareMatrix& m, const DiscreteDist& marginal) {
  check_enumerable(m, marginal);
  std::vector<std::pair<double, double>> atoms;
  const double w = 1.0 / static_cast<double>(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto comp = share_component_distribution(m, i, marginal);
    for (const auto& [v, p] : comp.atoms()) atoms.emplace_back(v, p * w);
  }
  return DiscreteDist(std::move(atoms));
}

}  // namespace p2pshare
