#include "loopsoup/cluster.hpp"

#include <algorithm>
#include <stdexcept>

namespace loopsoup {

nlohmann::json SizeCensus::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [d, c] : counts) j[std::to_string(d)] = c;
  return j;
}

ClusterBuilder::ClusterBuilder(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("ClusterBuilder: n must be positive");
  parent_.resize(static_cast<std::size_t>(n));
  size_.resize(static_cast<std::size_t>(n));
  reset();
}

void ClusterBuilder::reset() {
  loops_added_ = 0;
  for (int v = 0; v < n_; ++v) {
    parent_[static_cast<std::size_t>(v)] = v;
    size_[static_cast<std::size_t>(v)] = 1;
  }
}

int ClusterBuilder::find(int v) {
  while (parent_[static_cast<std::size_t>(v)] != v) {
    parent_[static_cast<std::size_t>(v)] =
        parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
    v = parent_[static_cast<std::size_t>(v)];
  }
  return v;
}

void ClusterBuilder::unite(int a, int b) {
  int ra = find(a);
  int rb = find(b);
  if (ra == rb) return;
  if (size_[static_cast<std::size_t>(ra)] < size_[static_cast<std::size_t>(rb)]) std::swap(ra, rb);
  parent_[static_cast<std::size_t>(rb)] = ra;
  size_[static_cast<std::size_t>(ra)] += size_[static_cast<std::size_t>(rb)];
}

void ClusterBuilder::add_walk(std::span<const int> walk) {
  const std::size_t k = walk.size();
  if (k < 2) throw std::invalid_argument("ClusterBuilder: loop shorter than 2");
  for (std::size_t i = 0; i < k; ++i) {
    const int a = walk[i];
    const int b = walk[(i + 1) % k];
    if (a < 0 || a >= n_ || b < 0 || b >= n_)
      throw std::out_of_range("ClusterBuilder: vertex index out of range");
    unite(a, b);
  }
  ++loops_added_;
}

int ClusterBuilder::component_count() {
  int count = 0;
  for (int v = 0; v < n_; ++v)
    if (find(v) == v) ++count;
  return count;
}

int ClusterBuilder::max_cluster_size() {
  int best = 0;
  for (int v = 0; v < n_; ++v)
    if (find(v) == v) best = std::max(best, size_[static_cast<std::size_t>(v)]);
  return best;
}

void ClusterBuilder::component_sizes(std::vector<int>& out) {
  out.clear();
  for (int v = 0; v < n_; ++v)
    if (find(v) == v) out.push_back(size_[static_cast<std::size_t>(v)]);
}

SizeCensus ClusterBuilder::census() {
  SizeCensus c;
  c.n = n_;
  for (int v = 0; v < n_; ++v)
    if (find(v) == v) ++c.counts[size_[static_cast<std::size_t>(v)]];
  return c;
}

Partition ClusterBuilder::partition() {
  std::vector<int> labels(static_cast<std::size_t>(n_));
  for (int v = 0; v < n_; ++v) labels[static_cast<std::size_t>(v)] = find(v);
  return Partition::from_labels(labels);
}

ClusterPartition clusters(const LoopConfig& config, int n) {
  ClusterBuilder builder(n);
  for (const auto& l : config.loops) builder.add_loop(l);
  return ClusterPartition{builder.partition(), static_cast<int>(config.loops.size())};
}

SizeCensus size_census(const ClusterPartition& p) {
  SizeCensus c;
  c.n = p.partition.ground_size();
  for (const auto& b : p.partition.blocks()) ++c.counts[static_cast<int>(b.size())];
  return c;
}

int max_cluster_size(const ClusterPartition& p) {
  std::size_t best = 0;
  for (const auto& b : p.partition.blocks()) best = std::max(best, b.size());
  return static_cast<int>(best);
}

std::vector<int> support(const Loop& loop) {
  std::vector<int> vs = loop.vertices;
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

}  // namespace loopsoup
