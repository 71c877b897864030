// partition.hpp — set partitions of {0..n-1}, the refinement order, and the
// Möbius weights of the partition lattice.
//
// Orientation: refines(sigma, pi) is true when sigma is FINER than pi (every
// block of sigma sits inside a block of pi). All enumeration is in canonical
// form: blocks sorted by smallest element, elements ascending.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace loopsoup {

class Partition {
 public:
  // Canonicalizes and validates: blocks disjoint, nonempty, covering {0..n-1}.
  static Partition from_blocks(int ground_size, std::vector<std::vector<int>> blocks);
  // block_index[v] = label of v's block; labels may be arbitrary ints.
  static Partition from_labels(std::span<const int> block_index);
  static Partition singletons(int ground_size);
  static Partition single_block(int ground_size);

  int ground_size() const { return static_cast<int>(block_of_.size()); }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int i) const { return blocks_[i]; }
  int block_of(int v) const { return block_of_[v]; }

  bool operator==(const Partition& other) const = default;
  bool operator<(const Partition& other) const;  // arbitrary total order (map keys)

  std::string to_string() const;
  nlohmann::json to_json() const;  // [[0],[1,2]]
  static Partition from_json(const nlohmann::json& j, int ground_size);

 private:
  Partition() = default;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

// sigma finer-than-or-equal pi. Throws on mismatched ground sizes.
bool refines(const Partition& sigma, const Partition& pi);

// Restriction of pi to a subset, relabeled by rank within the subset
// (so the result is again a partition of {0..|subset|-1}).
Partition restrict_to(const Partition& pi, std::span<const int> subset);

// (-1)^{|pi_tilde| - |pi|} * prod_i (|pi_tilde restricted to B_i| - 1)!
// Requires pi_tilde to refine pi.
std::int64_t mobius_weight(const Partition& pi_tilde, const Partition& pi);

std::uint64_t bell_number(int n);

inline constexpr std::uint64_t kDefaultEnumerationCap = 115975;  // Bell(10)

// Streams all partitions of {0..n-1} in restricted-growth-string order.
// Throws if Bell(n) exceeds cap, reporting the required count.
void for_each_partition(int n, const std::function<void(const Partition&)>& fn,
                        std::uint64_t cap = kDefaultEnumerationCap);

// Streams every partition finer than or equal to pi, exactly once, as the
// product of independent partitions of each block. Count is prod Bell(|B_i|).
void for_each_refinement(const Partition& pi, const std::function<void(const Partition&)>& fn,
                         std::uint64_t cap = kDefaultEnumerationCap);

std::vector<Partition> all_partitions(int n, std::uint64_t cap = kDefaultEnumerationCap);
std::vector<Partition> refinements_of(const Partition& pi,
                                      std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace loopsoup
