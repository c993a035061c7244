#include "p2pshare/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "p2pshare/error.hpp"
#include "p2pshare/log.hpp"

namespace p2pshare {
namespace {

std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

}  // namespace

Graph Graph::from_edges(int n, std::vector<Edge> edges) {
  require(n >= 0, "graph: negative node count");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      fail(ErrorCode::invalid_argument, "graph: edge endpoint out of range: [" + std::to_string(u) +
                                            ", " + std::to_string(v) + "]");
    }
    if (u == v) fail(ErrorCode::invalid_argument, "graph: self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    fail(ErrorCode::invalid_argument, "graph: duplicate edge [" + std::to_string(dup->first) + ", " +
                                          std::to_string(dup->second) + "]");
  }
  if (edges.size() > std::numeric_limits<EdgeIndex>::max()) {
    fail(ErrorCode::invalid_argument, "graph: too many edges");
  }

  Graph g;
  g.n_ = n;
  g.degrees_.assign(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : edges) {
    ++g.degrees_[u];
    ++g.degrees_[v];
  }
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + g.degrees_[i];
  g.adj_.resize(2 * edges.size());
  g.adj_edge_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Lexicographic edge order makes every neighbor list come out ascending.
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    g.adj_[cursor[u]] = v;
    g.adj_edge_[cursor[u]++] = static_cast<EdgeIndex>(e);
    g.adj_[cursor[v]] = u;
    g.adj_edge_[cursor[v]++] = static_cast<EdgeIndex>(e);
  }
  g.edges_ = std::move(edges);
  return g;
}

double Graph::mean_degree() const {
  if (n_ == 0) return 0.0;
  return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_);
}

std::optional<EdgeIndex> Graph::edge_index(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return std::nullopt;
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return std::nullopt;
  return incident_edges(u)[static_cast<std::size_t>(it - nb.begin())];
}

void DegreeSpec::validate() const {
  require(min_degree >= 1, "degree spec: min_degree must be >= 1");
  require(std::isfinite(mean_degree) && mean_degree > min_degree,
          "degree spec: mean degree must exceed min_degree");
  require(std::isfinite(degree_sd) && degree_sd >= 0.0, "degree spec: degree sd must be >= 0");
}

std::vector<int> sample_degree_sequence(const DegreeSpec& spec, int n, Rng& rng, int max_attempts) {
  require(n >= 2, "sample_degree_sequence: n must be >= 2");
  spec.validate();
  const double excess = spec.mean_degree - spec.min_degree;
  const int cap = n - 1;
  std::vector<int> degrees(static_cast<std::size_t>(n));

  auto draw = [&](auto&& delta) {
    long long total = 0;
    for (int& d : degrees) {
      const double rounded = std::round(delta());
      const double raw = spec.min_degree + rounded;
      d = raw >= cap ? cap : static_cast<int>(raw);
      total += d;
    }
    return total;
  };

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    long long total;
    if (spec.degree_sd == 0.0) {
      total = draw([&] { return excess; });
    } else {
      const double shape = excess * excess / (spec.degree_sd * spec.degree_sd);
      const double scale = spec.degree_sd * spec.degree_sd / excess;
      std::gamma_distribution<double> gamma(shape, scale);
      total = draw([&] { return gamma(rng); });
    }
    if (total % 2 == 0) return degrees;
  }
  fail(ErrorCode::domain, "sample_degree_sequence: no even-sum degree vector after " +
                              std::to_string(max_attempts) + " attempts");
}

std::size_t erdos_gallai_violation(std::span<const int> degrees) {
  std::vector<long long> d(degrees.begin(), degrees.end());
  std::sort(d.begin(), d.end(), std::greater<>());
  const std::size_t n = d.size();
  // suffix_min(k) = sum_{i>k} min(d_i, k); evaluated with a moving pointer
  // over the descending sequence.
  std::vector<long long> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + d[i];
  long long prefix = 0;
  std::size_t split = n;  // first index with d[i] <= k
  for (std::size_t k = 1; k <= n; ++k) {
    prefix += d[k - 1];
    const auto kk = static_cast<long long>(k);
    while (split > 0 && d[split - 1] <= kk) --split;
    // Among indices >= k: those < split have d > k (contribute k), others contribute d.
    const std::size_t big_end = std::max(split, k);
    const long long capped = kk * static_cast<long long>(big_end - k) + suffix[big_end];
    if (prefix > kk * (kk - 1) + capped) return k;
  }
  return 0;
}

namespace {

/// Deterministic Havel-Hakimi using residual-degree buckets.
std::vector<Edge> havel_hakimi(std::span<const int> degrees) {
  const int n = static_cast<int>(degrees.size());
  int max_deg = 0;
  for (int d : degrees) max_deg = std::max(max_deg, d);
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(max_deg) + 1);
  std::vector<int> residual(degrees.begin(), degrees.end());
  // Fill in descending index order so that back() yields the lowest index.
  for (int i = n - 1; i >= 0; --i) {
    if (residual[i] > 0) buckets[residual[i]].push_back(i);
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(std::accumulate(degrees.begin(), degrees.end(), 0LL) / 2));
  std::vector<int> chosen;
  int top = max_deg;
  while (true) {
    while (top > 0 && buckets[top].empty()) --top;
    if (top == 0) break;
    const int v = buckets[top].back();
    buckets[top].pop_back();
    const int need = residual[v];
    residual[v] = 0;
    chosen.clear();
    for (int k = top; k > 0 && static_cast<int>(chosen.size()) < need; --k) {
      auto& b = buckets[k];
      while (!b.empty() && static_cast<int>(chosen.size()) < need) {
        chosen.push_back(b.back());
        b.pop_back();
      }
    }
    if (static_cast<int>(chosen.size()) < need) {
      throw NotGraphicalError(0, "realize_graph: Havel-Hakimi ran out of partners");
    }
    for (int u : chosen) {
      edges.emplace_back(std::min(u, v), std::max(u, v));
      if (--residual[u] > 0) buckets[residual[u]].push_back(u);
    }
  }
  return edges;
}

}  // namespace

Graph realize_graph(std::span<const int> degrees, Rng& rng, std::size_t shuffle_swaps) {
  const auto n = static_cast<long long>(degrees.size());
  long long total = 0;
  for (int d : degrees) {
    require(d >= 0 && d <= std::max(0LL, n - 1),
            "realize_graph: degree " + std::to_string(d) + " outside [0, n-1]");
    total += d;
  }
  if (total % 2 != 0) throw NotGraphicalError(0, "realize_graph: odd degree sum");
  if (const auto k = erdos_gallai_violation(degrees); k != 0) {
    throw NotGraphicalError(k, "realize_graph: degree sequence not graphical (Erdos-Gallai fails at prefix k=" +
                                   std::to_string(k) + ")");
  }

  std::vector<Edge> edges = havel_hakimi(degrees);

  if (edges.size() >= 2 && shuffle_swaps > 0) {
    std::unordered_set<std::uint64_t> present;
    present.reserve(edges.size() * 2);
    for (const auto& [u, v] : edges) present.insert(edge_key(u, v));
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    std::bernoulli_distribution flip(0.5);
    std::size_t accepted = 0;
    for (std::size_t t = 0; t < shuffle_swaps; ++t) {
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      const bool cross = flip(rng);
      if (i == j) continue;
      const auto [a, b] = edges[i];
      const auto [c, d] = edges[j];
      Edge e1, e2;
      if (cross) {
        e1 = {a, d};
        e2 = {c, b};
      } else {
        e1 = {a, c};
        e2 = {b, d};
      }
      if (e1.first == e1.second || e2.first == e2.second) continue;
      const auto k1 = edge_key(e1.first, e1.second);
      const auto k2 = edge_key(e2.first, e2.second);
      if (k1 == k2 || present.count(k1) || present.count(k2)) continue;
      present.erase(edge_key(a, b));
      present.erase(edge_key(c, d));
      present.insert(k1);
      present.insert(k2);
      edges[i] = {std::min(e1.first, e1.second), std::max(e1.first, e1.second)};
      edges[j] = {std::min(e2.first, e2.second), std::max(e2.first, e2.second)};
      ++accepted;
    }
    log::debug("realize_graph: accepted " + std::to_string(accepted) + " of " +
               std::to_string(shuffle_swaps) + " swaps");
  }
  return Graph::from_edges(static_cast<int>(n), std::move(edges));
}

Graph generate_graph(const DegreeSpec& spec, int n, Rng& rng, int max_attempts) {
  for (int attempt = 0;; ++attempt) {
    auto degrees = sample_degree_sequence(spec, n, rng, max_attempts);
    try {
      return realize_graph(degrees, rng, default_swaps(degrees));
    } catch (const NotGraphicalError& e) {
      if (attempt + 1 >= max_attempts) throw;
      log::info(std::string("generate_graph: resampling after: ") + e.what());
    }
  }
}

Graph friends_of_friends_mask(const Graph& graph, const std::vector<bool>& eligible) {
  const int n = graph.node_count();
  require(static_cast<int>(eligible.size()) == n, "friends_of_friends: mask size mismatch");
  std::vector<int> seen(static_cast<std::size_t>(n), -1);
  std::vector<Edge> edges;
  std::vector<int> found;
  for (int i = 0; i < n; ++i) {
    if (!eligible[i]) continue;
    seen[i] = i;
    for (int k : graph.neighbors(i)) seen[k] = i;  // direct friends are excluded
    found.clear();
    for (int k : graph.neighbors(i)) {
      for (int j : graph.neighbors(k)) {
        if (j > i && eligible[j] && seen[j] != i) {
          seen[j] = i;
          found.push_back(j);
        }
      }
    }
    std::sort(found.begin(), found.end());
    for (int j : found) edges.emplace_back(i, j);
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph friends_of_friends(const Graph& graph, std::span<const int> eligible) {
  std::vector<bool> mask(static_cast<std::size_t>(graph.node_count()), false);
  for (int i : eligible) {
    require(i >= 0 && i < graph.node_count(), "friends_of_friends: eligible node out of range");
    mask[i] = true;
  }
  return friends_of_friends_mask(graph, mask);
}

IncidenceView incidence(const Graph& graph) {
  IncidenceView view;
  view.endpoints.assign(graph.edges().begin(), graph.edges().end());
  view.incident.resize(static_cast<std::size_t>(graph.node_count()));
  for (int i = 0; i < graph.node_count(); ++i) {
    auto inc = graph.incident_edges(i);
    view.incident[i].assign(inc.begin(), inc.end());
  }
  return view;
}

}  // namespace p2pshare
