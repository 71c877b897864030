// cluster.hpp — the cluster partition C_alpha of a loop configuration and the
// size census |I_d|.
//
// Union-find with path halving and union by size; edges are consumed
// streaming per loop, memory stays O(n) whatever the total loop length.
#pragma once

#include <map>
#include <span>
#include <vector>

#include "json.hpp"
#include "loopsoup/partition.hpp"
#include "loopsoup/sampler.hpp"

namespace loopsoup {

struct SizeCensus {
  std::map<int, long long> counts;  // cluster size d -> |I_d|
  int n = 0;

  long long count(int d) const {
    const auto it = counts.find(d);
    return it == counts.end() ? 0 : it->second;
  }
  nlohmann::json to_json() const;  // {"1": c1, "2": c2, ...}
};

// Reusable accumulator: reset(), feed loops, then query. A vertex visited by
// no loop stays a singleton.
class ClusterBuilder {
 public:
  explicit ClusterBuilder(int n);

  void reset();
  void add_walk(std::span<const int> walk);  // consecutive edges plus the wrap edge
  void add_loop(const Loop& loop) { add_walk(loop.vertices); }

  int loops_added() const { return loops_added_; }
  int component_count();
  int max_cluster_size();
  // component sizes in root order; cheap path for the experiment loops
  void component_sizes(std::vector<int>& out);
  SizeCensus census();
  Partition partition();

 private:
  int find(int v);
  void unite(int a, int b);

  int n_;
  int loops_added_ = 0;
  std::vector<int> parent_;
  std::vector<int> size_;
};

struct ClusterPartition {
  Partition partition;
  int built_from = 0;  // number of loops consumed
};

ClusterPartition clusters(const LoopConfig& config, int n);
SizeCensus size_census(const ClusterPartition& p);
int max_cluster_size(const ClusterPartition& p);

// Distinct vertices traversed by a loop, ascending.
std::vector<int> support(const Loop& loop);

}  // namespace loopsoup
