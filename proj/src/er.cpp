#include "loopsoup/er.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace loopsoup {

void ErParams::check() const {
  if (n < 2) throw std::invalid_argument("ErParams: n must be >= 2");
  if (!(c > 0.0) || c >= static_cast<double>(n))
    throw std::invalid_argument("ErParams: need 0 < c < n so that p = c/n lies in (0,1)");
}

EdgeList sample_gnp(rng::Engine& e, const ErParams& params) {
  params.check();
  const double p = params.c / static_cast<double>(params.n);
  const double log1mp = std::log1p(-p);
  EdgeList edges;
  // Batagelj-Brandes: walk the binom(n,2) edge slots (v,w), w < v, with
  // geometric skip lengths.
  long long v = 1;
  long long w = -1;
  while (v < params.n) {
    const double r = rng::unit(e);
    w += 1 + static_cast<long long>(std::floor(std::log1p(-r) / log1mp));
    while (w >= v && v < params.n) {
      w -= v;
      ++v;
    }
    if (v < params.n)
      edges.emplace_back(static_cast<int>(w), static_cast<int>(v));
  }
  return edges;
}

ComponentScan::ComponentScan(int n, const EdgeList& edges) {
  if (n < 1) throw std::invalid_argument("ComponentScan: n must be positive");
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  for (int v = 0; v < n; ++v) parent[static_cast<std::size_t>(v)] = v;
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw std::out_of_range("ComponentScan: vertex out of range");
    int ra = find(a);
    int rb = find(b);
    if (ra == rb) continue;
    if (size[static_cast<std::size_t>(ra)] < size[static_cast<std::size_t>(rb)])
      std::swap(ra, rb);
    parent[static_cast<std::size_t>(rb)] = ra;
    size[static_cast<std::size_t>(ra)] += size[static_cast<std::size_t>(rb)];
  }
  std::vector<long long> edge_count(static_cast<std::size_t>(n), 0);
  for (const auto& [a, b] : edges) ++edge_count[static_cast<std::size_t>(find(a))];
  trees_.assign(static_cast<std::size_t>(n) + 1, 0);
  clusters_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 0; v < n; ++v) {
    if (find(v) != v) continue;
    const int d = size[static_cast<std::size_t>(v)];
    ++clusters_[static_cast<std::size_t>(d)];
    if (edge_count[static_cast<std::size_t>(v)] == d - 1) ++trees_[static_cast<std::size_t>(d)];
  }
}

long long ComponentScan::tree_count(int d) const {
  if (d < 1) throw std::invalid_argument("tree_count: d must be >= 1");
  return d < static_cast<int>(trees_.size()) ? trees_[static_cast<std::size_t>(d)] : 0;
}

long long ComponentScan::cluster_count(int d) const {
  if (d < 1) throw std::invalid_argument("cluster_count: d must be >= 1");
  return d < static_cast<int>(clusters_.size()) ? clusters_[static_cast<std::size_t>(d)] : 0;
}

long long isolated_tree_census(int n, const EdgeList& edges, int d) {
  return ComponentScan(n, edges).tree_count(d);
}

long long isolated_cluster_census(int n, const EdgeList& edges, int d) {
  return ComponentScan(n, edges).cluster_count(d);
}

double er_tree_factorial_moment(int n, double c, int d, int k, bool paper_display_form) {
  ErParams{n, c}.check();
  if (d < 1 || k < 0) throw std::invalid_argument("er_tree_factorial_moment: need d >= 1, k >= 0");
  if (k == 0) return 1.0;
  if (static_cast<long long>(k) * d > n) return 0.0;
  const double p = c / static_cast<double>(n);
  const double log_p = std::log(p);
  const double log_1mp = std::log1p(-p);
  double log_value = 0.0;
  for (int j = 0; j < k; ++j) {
    // log binom(n - jd, d), exact multiplicative form
    for (int i = 0; i < d; ++i)
      log_value += std::log(static_cast<double>(n - j * d - i)) -
                   std::log(static_cast<double>(i + 1));
  }
  const double kd = static_cast<double>(k) * d;
  const double between = kd * (n - kd) + static_cast<double>(k) * (k - 1) * d * d / 2.0;
  if (paper_display_form) {
    log_value += k * (d - 1) * log_p;
    log_value += (between + d * (d - 1) / 2.0 - d + 1.0) * log_1mp;
  } else {
    const double within =
        (d - 2) * std::log(static_cast<double>(d)) + (d - 1) * log_p +
        (d * (d - 1) / 2.0 - (d - 1)) * log_1mp;
    log_value += k * within + between * log_1mp;
  }
  return std::exp(log_value);
}

double er_cluster_density_limit(double c, int d) {
  if (d < 1 || !(c > 0.0)) throw std::invalid_argument("er_cluster_density_limit: bad arguments");
  double log_value = (d - 2) * std::log(static_cast<double>(d)) +
                     (d - 1) * std::log(c) - c * d;
  log_value -= std::lgamma(static_cast<double>(d) + 1.0);
  return std::exp(log_value);
}

}  // namespace loopsoup
