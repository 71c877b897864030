// rng.hpp — seeded, splittable random streams and portable sampling helpers.
//
// Generator contract: std::mt19937_64, one engine per stream. Stream i of a
// 64-bit master seed is obtained by mixing (seed, i) through splitmix64 and
// seeding the engine from the resulting words via std::seed_seq, so batch i
// of a run reproduces bit-for-bit regardless of how batches are scheduled.
// Uniform and Poisson draws below avoid std::*_distribution, whose output
// sequences are implementation-defined; these helpers are pinned.
#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>

namespace loopsoup::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream-split rule: state = seed XOR (stream+1)*odd_constant, then two
// splitmix64 outputs seed the engine.
inline Engine make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t s = seed ^ ((stream + 1) * 0xd1342543de82ef95ULL);
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Engine(seq);
}

// Uniform double in [0, 1) with 53 random bits.
inline double unit(Engine& e) { return static_cast<double>(e() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n), unbiased (rejection on the top sliver).
inline int below(Engine& e, int n) {
  assert(n >= 1);
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = ~0ULL - ~0ULL % un;
  std::uint64_t x;
  do {
    x = e();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

// Poisson by CDF inversion; means above 60 are split off exactly using
// Poisson additivity so e^{-mean} stays well inside double range.
inline long long poisson(Engine& e, double mean) {
  assert(mean >= 0.0);
  long long total = 0;
  while (mean > 60.0) {
    double part = 60.0;
    double u = unit(e);
    double p = std::exp(-part);
    double cum = p;
    long long k = 0;
    while (u > cum) {
      ++k;
      p *= part / static_cast<double>(k);
      cum += p;
    }
    total += k;
    mean -= part;
  }
  double u = unit(e);
  double p = std::exp(-mean);
  double cum = p;
  long long k = 0;
  while (u > cum) {
    ++k;
    p *= mean / static_cast<double>(k);
    cum += p;
    if (k > 1000) break;  // u in the far tail of an already tiny remainder
  }
  return total + k;
}

}  // namespace loopsoup::rng
