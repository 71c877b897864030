#include "loopsoup/partition.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace loopsoup {

namespace {

// Factorials up to 20! fit in int64.
std::int64_t factorial64(int n) {
  static constexpr std::array<std::int64_t, 21> table = {
      1LL,
      1LL,
      2LL,
      6LL,
      24LL,
      120LL,
      720LL,
      5040LL,
      40320LL,
      362880LL,
      3628800LL,
      39916800LL,
      479001600LL,
      6227020800LL,
      87178291200LL,
      1307674368000LL,
      20922789888000LL,
      355687428096000LL,
      6402373705728000LL,
      121645100408832000LL,
      2432902008176640000LL};
  if (n < 0 || n > 20) throw std::overflow_error("factorial64: argument out of range");
  return table[static_cast<std::size_t>(n)];
}

// Iterates restricted growth strings a[0..n-1]: a[0]=0, a[i] <= 1+max(a[0..i-1]).
// Calls fn(labels) for each; block labels are first-occurrence ordered, which
// is exactly the canonical block order.
template <typename Fn>
void for_each_rgs(int n, Fn&& fn) {
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::vector<int> maxp(static_cast<std::size_t>(n), 1);  // maxp[i] = 1+max(a[0..i-1])
  maxp[0] = 0;                                            // a[0] is pinned at 0
  for (;;) {
    fn(a);
    int i = n - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] == maxp[static_cast<std::size_t>(i)]) --i;
    if (i == 0) return;
    ++a[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      a[static_cast<std::size_t>(j)] = 0;
      maxp[static_cast<std::size_t>(j)] =
          std::max(maxp[static_cast<std::size_t>(j - 1)],
                   a[static_cast<std::size_t>(j - 1)] + 1);
    }
  }
}

}  // namespace

Partition Partition::from_labels(std::span<const int> block_index) {
  Partition p;
  const int n = static_cast<int>(block_index.size());
  if (n <= 0) throw std::invalid_argument("Partition: empty ground set");
  p.block_of_.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> relabel;  // original label -> canonical index, via scan order
  std::vector<int> seen_labels;
  for (int v = 0; v < n; ++v) {
    const int lab = block_index[static_cast<std::size_t>(v)];
    int idx = -1;
    for (std::size_t i = 0; i < seen_labels.size(); ++i) {
      if (seen_labels[i] == lab) {
        idx = static_cast<int>(i);
        break;
      }
    }
    if (idx < 0) {
      idx = static_cast<int>(seen_labels.size());
      seen_labels.push_back(lab);
      p.blocks_.emplace_back();
    }
    p.block_of_[static_cast<std::size_t>(v)] = idx;
    p.blocks_[static_cast<std::size_t>(idx)].push_back(v);
  }
  return p;
}

Partition Partition::from_blocks(int ground_size, std::vector<std::vector<int>> blocks) {
  if (ground_size <= 0) throw std::invalid_argument("Partition: ground size must be positive");
  std::vector<int> labels(static_cast<std::size_t>(ground_size), -1);
  int lab = 0;
  for (const auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("Partition: empty block");
    for (int v : b) {
      if (v < 0 || v >= ground_size)
        throw std::invalid_argument("Partition: vertex out of range");
      if (labels[static_cast<std::size_t>(v)] != -1)
        throw std::invalid_argument("Partition: blocks are not disjoint");
      labels[static_cast<std::size_t>(v)] = lab;
    }
    ++lab;
  }
  for (int v = 0; v < ground_size; ++v) {
    if (labels[static_cast<std::size_t>(v)] == -1)
      throw std::invalid_argument("Partition: blocks do not cover the ground set");
  }
  return from_labels(labels);
}

Partition Partition::singletons(int ground_size) {
  std::vector<int> labels(static_cast<std::size_t>(ground_size));
  for (int v = 0; v < ground_size; ++v) labels[static_cast<std::size_t>(v)] = v;
  return from_labels(labels);
}

Partition Partition::single_block(int ground_size) {
  std::vector<int> labels(static_cast<std::size_t>(ground_size), 0);
  return from_labels(labels);
}

bool Partition::operator<(const Partition& other) const {
  if (block_of_.size() != other.block_of_.size())
    return block_of_.size() < other.block_of_.size();
  return block_of_ < other.block_of_;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    os << (i ? ",{" : "{");
    for (std::size_t j = 0; j < blocks_[i].size(); ++j) os << (j ? "," : "") << blocks_[i][j];
    os << '}';
  }
  os << '}';
  return os.str();
}

nlohmann::json Partition::to_json() const { return nlohmann::json(blocks_); }

Partition Partition::from_json(const nlohmann::json& j, int ground_size) {
  std::vector<std::vector<int>> blocks = j.get<std::vector<std::vector<int>>>();
  return from_blocks(ground_size, std::move(blocks));
}

bool refines(const Partition& sigma, const Partition& pi) {
  if (sigma.ground_size() != pi.ground_size())
    throw std::invalid_argument("refines: mismatched ground sizes");
  for (const auto& b : sigma.blocks()) {
    const int target = pi.block_of(b.front());
    for (int v : b) {
      if (pi.block_of(v) != target) return false;
    }
  }
  return true;
}

Partition restrict_to(const Partition& pi, std::span<const int> subset) {
  if (subset.empty()) throw std::invalid_argument("restrict_to: empty subset");
  std::vector<int> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("restrict_to: repeated vertex in subset");
  std::vector<int> labels(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const int v = sorted[i];
    if (v < 0 || v >= pi.ground_size())
      throw std::invalid_argument("restrict_to: vertex out of range");
    labels[i] = pi.block_of(v);
  }
  return Partition::from_labels(labels);
}

std::int64_t mobius_weight(const Partition& pi_tilde, const Partition& pi) {
  if (!refines(pi_tilde, pi))
    throw std::invalid_argument("mobius_weight: arguments are not comparable (need pi_tilde finer than pi)");
  // Each block of pi_tilde lies inside one block of pi; count them per block.
  std::vector<int> inner_count(static_cast<std::size_t>(pi.block_count()), 0);
  for (const auto& b : pi_tilde.blocks())
    ++inner_count[static_cast<std::size_t>(pi.block_of(b.front()))];
  std::int64_t w = 1;
  for (int c : inner_count) w *= factorial64(c - 1);
  const int diff = pi_tilde.block_count() - pi.block_count();
  return (diff % 2 == 0) ? w : -w;
}

std::uint64_t bell_number(int n) {
  if (n < 0 || n > 25) throw std::overflow_error("bell_number: argument out of range for uint64");
  if (n == 0) return 1;
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i < n; ++i) {
    std::vector<std::uint64_t> next(row.size() + 1);
    next[0] = row.back();
    for (std::size_t j = 0; j < row.size(); ++j) next[j + 1] = next[j] + row[j];
    row = std::move(next);
  }
  return row.back();
}

void for_each_partition(int n, const std::function<void(const Partition&)>& fn,
                        std::uint64_t cap) {
  if (n <= 0) throw std::invalid_argument("for_each_partition: n must be positive");
  if (n > 25)
    throw std::length_error("for_each_partition: enumeration needs more than " +
                            std::to_string(~0ULL) + " partitions, cap is " + std::to_string(cap));
  const std::uint64_t count = bell_number(n);
  if (count > cap)
    throw std::length_error("for_each_partition: enumeration needs " + std::to_string(count) +
                            " partitions, cap is " + std::to_string(cap));
  for_each_rgs(n, [&](const std::vector<int>& labels) { fn(Partition::from_labels(labels)); });
}

void for_each_refinement(const Partition& pi, const std::function<void(const Partition&)>& fn,
                         std::uint64_t cap) {
  unsigned __int128 count = 1;
  for (const auto& b : pi.blocks()) {
    if (b.size() > 25) {
      count = static_cast<unsigned __int128>(1) << 101;
      break;
    }
    count *= bell_number(static_cast<int>(b.size()));
    if (count > (static_cast<unsigned __int128>(1) << 100)) break;  // clamp, already way past any cap
  }
  if (count > cap) {
    const std::uint64_t shown =
        count > ~0ULL ? ~0ULL : static_cast<std::uint64_t>(count);
    throw std::length_error("for_each_refinement: enumeration needs " + std::to_string(shown) +
                            " partitions, cap is " + std::to_string(cap));
  }

  // Odometer over per-block restricted growth strings. Sub-block labels are
  // made globally unique by a per-block offset (block sizes bound the label
  // count), then from_labels canonicalizes.
  const int n = pi.ground_size();
  const int nblocks = pi.block_count();
  std::vector<std::vector<std::vector<int>>> per_block_rgs(static_cast<std::size_t>(nblocks));
  for (int i = 0; i < nblocks; ++i) {
    const int bsize = static_cast<int>(pi.block(i).size());
    per_block_rgs[static_cast<std::size_t>(i)].reserve(bell_number(bsize));
    for_each_rgs(bsize, [&](const std::vector<int>& a) {
      per_block_rgs[static_cast<std::size_t>(i)].push_back(a);
    });
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(nblocks), 0);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (;;) {
    int offset = 0;
    for (int i = 0; i < nblocks; ++i) {
      const auto& block = pi.block(i);
      const auto& a = per_block_rgs[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      for (std::size_t j = 0; j < block.size(); ++j)
        labels[static_cast<std::size_t>(block[j])] = offset + a[j];
      offset += static_cast<int>(block.size());
    }
    fn(Partition::from_labels(labels));
    int i = nblocks - 1;
    while (i >= 0) {
      if (++idx[static_cast<std::size_t>(i)] < per_block_rgs[static_cast<std::size_t>(i)].size())
        break;
      idx[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

std::vector<Partition> all_partitions(int n, std::uint64_t cap) {
  std::vector<Partition> out;
  for_each_partition(n, [&](const Partition& p) { out.push_back(p); }, cap);
  return out;
}

std::vector<Partition> refinements_of(const Partition& pi, std::uint64_t cap) {
  std::vector<Partition> out;
  for_each_refinement(pi, [&](const Partition& p) { out.push_back(p); }, cap);
  return out;
}

}  // namespace loopsoup
