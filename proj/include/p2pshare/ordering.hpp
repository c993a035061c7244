#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace p2pshare {

/// Finite distribution: atoms sorted by value, duplicates merged, positive
/// probabilities summing to one.
class DiscreteDist {
 public:
  DiscreteDist() = default;
  /// Validates, sorts and merges. Zero-probability atoms are dropped.
  explicit DiscreteDist(std::vector<std::pair<double, double>> atoms);

  static DiscreteDist point(double value) { return DiscreteDist({{value, 1.0}}); }

  const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
  double mean() const;
  double variance() const;

 private:
  std::vector<std::pair<double, double>> atoms_;
};

/// E[(X - t)+].
double stop_loss(const DiscreteDist& dist, double t);

enum class ConvexOrder { equal, x_below, y_below, incomparable, means_differ };

std::string to_string(ConvexOrder order);

ConvexOrder convex_order_compare(const DiscreteDist& x, const DiscreteDist& y, double tol = 1e-12);

/// Nonnegative square matrix, row-major.
class ShareMatrix {
 public:
  ShareMatrix() = default;
  explicit ShareMatrix(std::vector<std::vector<double>> rows);

  static ShareMatrix identity(std::size_t n);

  std::size_t size() const { return rows_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

 private:
  std::vector<std::vector<double>> rows_;
};

enum class MatrixClass { doubly_stochastic, column_stochastic, neither };

std::string to_string(MatrixClass cls);

MatrixClass classify_matrix(const ShareMatrix& m, double tol = 1e-9);

/// xi = M x. Requires unit column sums.
std::vector<double> apply_share(const ShareMatrix& m, std::span<const double> x, double tol = 1e-9);

/// Block-diagonal averaging matrix over consecutive blocks of the given sizes.
ShareMatrix clique_share_matrix(std::span<const int> sizes);

/// varX * (sum_c 1/size_c) / n, the clique-pooling closed form. The exact
/// variance of a uniformly picked component is varX * (clique count) / n;
/// see share_picked_distribution.
double clique_pool_variance(int n, std::span<const int> sizes, double var_x);

/// trace(M Sigma M^T).
double trace_variance(const ShareMatrix& m, const std::vector<std::vector<double>>& sigma);

/// Ascending-prefix majorization: true iff the totals agree within tol and
/// every prefix sum of sorted-ascending x is <= that of y. Under this
/// convention (4, 0) majorizes-below (1, 3): the more spread vector is the
/// "smaller" one.
bool majorizes(std::span<const double> x, std::span<const double> y, double tol = 1e-9);

/// Exact distribution of component `row` of M X for X with i.i.d.
/// components drawn from `marginal`. Refuses more than 4 components or more
/// than 5 atoms.
DiscreteDist share_component_distribution(const ShareMatrix& m, std::size_t row, const DiscreteDist& marginal);

/// Exact distribution of (M X)_I with I uniform over components, same limits.
DiscreteDist share_picked_distribution(const ShareMatrix& m, const DiscreteDist& marginal);

}  // namespace p2pshare
