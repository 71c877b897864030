// er.hpp — Erdős–Rényi G(n, c/n) baseline: sampling, component censuses, and
// the isolated-tree factorial moment.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "loopsoup/rng.hpp"

namespace loopsoup {

struct ErParams {
  int n = 2;
  double c = 1.0;  // edge probability p = c/n, must land in (0,1)

  void check() const;
};

using EdgeList = std::vector<std::pair<int, int>>;

// Each of the binom(n,2) edges independently present with probability c/n.
// Geometric edge skipping, expected O(c n) work.
EdgeList sample_gnp(rng::Engine& e, const ErParams& params);

// One connected-components scan answering both censuses for every d.
class ComponentScan {
 public:
  ComponentScan(int n, const EdgeList& edges);

  // components with d vertices and d-1 internal edges
  long long tree_count(int d) const;
  // all components with d vertices
  long long cluster_count(int d) const;

 private:
  std::vector<long long> trees_;     // indexed by size
  std::vector<long long> clusters_;  // indexed by size
};

long long isolated_tree_census(int n, const EdgeList& edges, int d);
long long isolated_cluster_census(int n, const EdgeList& edges, int d);

// k-th factorial moment of the number of isolated trees of size d:
//   prod_{j=0}^{k-1} binom(n-jd, d)
//   * [d^{d-2} p^{d-1} (1-p)^{d(d-1)/2-(d-1)}]^k
//   * (1-p)^{kd(n-kd) + k(k-1)d^2/2}
// with p = c/n. This is the oracle-confirmed form; the paper's displayed
// exponent (per-set factor not raised to k, spanning-tree count d^{d-2}
// absent) is available with paper_display_form = true for comparison.
double er_tree_factorial_moment(int n, double c, int d, int k, bool paper_display_form = false);

// Large-n limit of E[cluster count of size d] / n: d^{d-2} c^{d-1} e^{-cd} / d!.
double er_cluster_density_limit(double c, int d);

}  // namespace loopsoup
