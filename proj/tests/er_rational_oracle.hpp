// er_rational_oracle.hpp — test-only exact-rational oracles for the
// isolated-tree factorial moment: exhaustive expectation over all graphs and
// the closed formula re-derived in rational arithmetic.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <utility>
#include <vector>

#include "loopsoup/er.hpp"

namespace loopsoup::testing {

using Rational = boost::multiprecision::cpp_rational;

inline Rational exhaustive_tree_factorial_moment(int n, const Rational& p, int d, int k) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const int m = static_cast<int>(pairs.size());
  Rational total = 0;
  for (long long mask = 0; mask < (1LL << m); ++mask) {
    EdgeList edges;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) edges.push_back(pairs[static_cast<std::size_t>(i)]);
    const long long trees = isolated_tree_census(n, edges, d);
    long long ff = 1;
    for (int j = 0; j < k; ++j) ff *= trees - j;
    if (ff == 0) continue;
    Rational weight = 1;
    for (int i = 0; i < m; ++i) weight *= (mask >> i & 1) ? p : 1 - p;
    total += weight * ff;
  }
  return total;
}

inline Rational rational_tree_factorial_moment(int n, const Rational& p, int d, int k) {
  if (static_cast<long long>(k) * d > n) return 0;
  Rational v = 1;
  for (int j = 0; j < k; ++j) {
    Rational binom = 1;
    for (int i = 0; i < d; ++i) {
      binom *= n - j * d - i;
      binom /= i + 1;
    }
    v *= binom;
  }
  Rational within = 1;
  for (int i = 0; i < d - 2; ++i) within *= d;  // d^{d-2}; the d=1 case is 1^{-1} = 1
  for (int i = 0; i < d - 1; ++i) within *= p;
  const int within_absent = d * (d - 1) / 2 - (d - 1);
  for (int i = 0; i < within_absent; ++i) within *= 1 - p;
  for (int i = 0; i < k; ++i) v *= within;
  const long long between = static_cast<long long>(k) * d * (n - static_cast<long long>(k) * d) +
                            static_cast<long long>(k) * (k - 1) * d * d / 2;
  for (long long i = 0; i < between; ++i) v *= 1 - p;
  return v;
}

}  // namespace loopsoup::testing
