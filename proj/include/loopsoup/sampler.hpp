// sampler.hpp — exact sampling of the Poisson loop ensemble DL_alpha.
//
// Scheme (the paper is analytic and fixes no algorithm): a loop's length k is
// drawn proportional to nu(length k) = tr(P^k)/k, then a uniformly based
// pointed closed walk of that length is drawn by bridge conditioning, and the
// base point is forgotten via canonical rotation. An unbased loop of
// multiplicity m has k/m pointed representatives, so the projected law is
// exactly nu, multiplicity weighting included. Soup = Poisson(alpha |nu|)
// many independent loops, with the Poisson rate taken from the exact mass;
// the cutoff only redistributes mass within lengths, bounded by the cutoff.
//
// All sampling entry points are const and thread-safe; callers hold one
// rng::Engine per thread (see rng.hpp for the stream-split rule).
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "loopsoup/graph.hpp"
#include "loopsoup/rng.hpp"

namespace loopsoup {

// Cyclic vertex sequence, length >= 2, no two consecutive vertices equal
// (including the wrap-around), stored in lexicographically least rotation so
// multiset equality is structural.
struct Loop {
  std::vector<int> vertices;

  static Loop from_walk(std::vector<int> walk);
  int length() const { return static_cast<int>(vertices.size()); }
  auto operator<=>(const Loop&) const = default;
};

// Index of the lexicographically least rotation (Booth-style two-pointer).
std::size_t least_rotation(std::span<const int> s);

// Shortest cyclic word whose repetition yields the loop.
Loop primitive_root(const Loop& loop);

struct LoopConfig {
  std::vector<Loop> loops;
  long long total_size = 0;  // sum of lengths

  nlohmann::json to_json() const;  // {"loops": [[v0,v1,...],...], "total_size": M}
  static LoopConfig from_json(const nlohmann::json& j);
};

struct SamplerSettings {
  std::uint64_t seed = 20240801;
  double tail_cutoff_epsilon = 0x1.0p-60;  // relative truncation of the length law
  int general_cap = 64;                    // vertex cap for the general-graph mode

  void check() const;
};

// Truncated table of w_k = tr(P^k)/k, k >= 2, with the analytic geometric
// tail beyond the last entry below cutoff * total mass.
class LengthTable {
 public:
  // Complete graph: tr(P^k) = ((n-1)^k + (n-1)(-1)^k) / (n-1+kappa)^k.
  static LengthTable complete(int n, double kappa, double cutoff);
  // General graph, from the (real) spectrum of P.
  static LengthTable from_spectrum(std::span<const double> eigenvalues, double cutoff);

  double total_weight() const { return cdf_.empty() ? 0.0 : cdf_.back(); }
  double exact_mass() const { return exact_mass_; }
  int max_length() const { return static_cast<int>(cdf_.size()) + 1; }
  double weight(int k) const;  // w_k, 0 outside the table

  int sample(rng::Engine& e) const;  // a length in [2, max_length]

 private:
  std::vector<double> cdf_;  // cdf_[i] = w_2 + ... + w_{i+2}
  double exact_mass_ = 0.0;
};

// Loop soup on K_n: closed-form length weights and O(1)-per-step bridge
// moves; no matrices, so n up to ~10^6 is fine (table memory permitting).
class CompleteSoupSampler {
 public:
  CompleteSoupSampler(int n, double kappa, double alpha, SamplerSettings settings = {});

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  const LengthTable& lengths() const { return table_; }
  double soup_rate() const { return alpha_ * table_.exact_mass(); }

  void sample_walk(rng::Engine& e, std::vector<int>& out) const;
  void sample_walk_of_length(rng::Engine& e, int k, std::vector<int>& out) const;
  Loop sample_loop(rng::Engine& e) const;
  LoopConfig sample_soup(rng::Engine& e) const;

  // Streams the walks of one soup without materializing loops.
  template <typename Fn>
  void sample_soup_walks(rng::Engine& e, std::vector<int>& buf, Fn&& per_walk) const {
    const long long count = rng::poisson(e, soup_rate());
    for (long long i = 0; i < count; ++i) {
      sample_walk(e, buf);
      per_walk(std::as_const(buf));
    }
  }

  // Closed-walk counts on K_n: number of length-r walks u -> t in the
  // complete graph, ((n-1)^r + (n-1)(-1)^r)/n if u = t and
  // ((n-1)^r - (-1)^r)/n otherwise. Exposed for tests.
  static double closed_walk_count(int n, int r, bool same_endpoint);

 private:
  int n_;
  double kappa_;
  double alpha_;
  SamplerSettings settings_;
  LengthTable table_;
  // p_target_[r]: probability that the bridge jumps straight to the base
  // point when r more edges remain after the jump (valid from a vertex other
  // than the base). Exact 128-bit integer walk counts while (n-1)^r fits;
  // beyond the table the (-1)^r correction is below 2^-100 and the move
  // collapses to uniform over the n-1 other vertices.
  std::vector<double> p_target_;
};

// Loop soup on an arbitrary finite GraphSpec (n <= settings.general_cap):
// length weights from the spectrum, bridge weights from precomputed matrix
// powers P^r up to the cutoff length.
class GeneralSoupSampler {
 public:
  GeneralSoupSampler(const GraphSpec& g, double alpha, SamplerSettings settings = {});

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  const LengthTable& lengths() const { return table_; }
  double soup_rate() const { return alpha_ * table_.exact_mass(); }

  void sample_walk(rng::Engine& e, std::vector<int>& out) const;
  void sample_walk_of_length(rng::Engine& e, int k, std::vector<int>& out) const;
  Loop sample_loop(rng::Engine& e) const;
  LoopConfig sample_soup(rng::Engine& e) const;

  template <typename Fn>
  void sample_soup_walks(rng::Engine& e, std::vector<int>& buf, Fn&& per_walk) const {
    const long long count = rng::poisson(e, soup_rate());
    for (long long i = 0; i < count; ++i) {
      sample_walk(e, buf);
      per_walk(std::as_const(buf));
    }
  }

 private:
  int n_;
  double alpha_;
  SamplerSettings settings_;
  LengthTable table_;
  std::vector<Eigen::MatrixXd> powers_;   // P^0 .. P^{max_length}
  std::vector<std::vector<double>> base_cdf_;  // per length k: cumsum of diag(P^k)
};

// Primitive-loop projection: maps each loop to its primitive root and
// de-duplicates. PL_alpha = pi(DL_alpha).
std::vector<Loop> project_primitive(const LoopConfig& config);

}  // namespace loopsoup
