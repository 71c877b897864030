// exact.hpp — closed-form engine for the complete-graph loop-soup model:
// moments and cumulants of Y^(alpha), partition probabilities, factorial
// moments of cluster counts, limit laws, loop-measure mass, and the size
// generating function.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "loopsoup/bigfloat.hpp"
#include "loopsoup/partition.hpp"

namespace loopsoup {

struct ModelParams {
  int n = 2;           // vertex count, >= 2
  double kappa = 1.0;  // killing rate, > 0
  double alpha = 1.0;  // soup intensity multiplier, > 0

  void check() const;
};

// Moments m_j = (1 - j/(n+kappa))^{-alpha} of Y^(alpha) and the cumulants
// obtained from the moment-cumulant recursion
//   c_j = m_j - sum_{i=1}^{j-1} binom(j-1, i-1) c_i m_{j-i}.
//
// The recursion cancels catastrophically (c_d ~ n^{-d} out of O(1) moments),
// so construction refuses to run below required_bits(max_order, params) =
// ceil(max_order * log2(n+kappa)) + 64 mantissa bits. Moment bases
// (n+kappa-j)/(n+kappa) are formed from exactly representable operands; the
// only roundings are the base division and the alpha-power.
class MomentTable {
 public:
  MomentTable(const ModelParams& params, int max_order, int precision_bits);

  const ModelParams& params() const { return params_; }
  int max_order() const { return max_order_; }
  int precision_bits() const { return precision_bits_; }

  const bf::Real& moment(int j) const;    // j in [0, max_order]
  const bf::Real& cumulant(int j) const;  // j in [1, max_order]
  double moment_d(int j) const;
  double cumulant_d(int j) const;

  static int required_bits(int max_order, const ModelParams& params);

 private:
  ModelParams params_;
  int max_order_;
  int precision_bits_;
  std::vector<bf::Real> moments_;
  std::vector<bf::Real> cumulants_;  // index 0 unused
};

// m_j in doubles; throws std::domain_error for j >= n+kappa.
double moment(int j, const ModelParams& params);

// P(C_alpha is finer than pi) = det_ratio(pi)^alpha
//                             = (kappa/(kappa+n))^alpha prod_i (1-|B_i|/(n+kappa))^{-alpha}.
double prob_finer(const Partition& pi, const ModelParams& params);
double log_prob_finer(const Partition& pi, const ModelParams& params);

// P(C_alpha = pi) by Möbius inversion over refinements of pi.
double prob_exact(const Partition& pi, const ModelParams& params,
                  std::uint64_t enumeration_cap = kDefaultEnumerationCap);

// P(C_alpha = {X}) = c_n / m_n, from a MomentTable at precision_bits
// (0 = the minimum admissible precision).
double prob_connected(const ModelParams& params, int precision_bits = 0);

// P(D_1..D_k isolated) = prod_i m_{d_i} * m_{n - sum d_i} / m_n.
double prob_isolated_sets(std::span<const int> sizes, const ModelParams& params);

// E[|I_1|(|I_1|-1)...(|I_1|-k+1)] = n^{(k)} (kappa/(k+kappa))^alpha (1-1/(n+kappa))^{-k alpha}.
double factorial_moment_isolated_vertices(int k, const ModelParams& params);

// E[|I_d|^{(k)}] = prod_{j=0}^{k-1} binom(n-jd, d) * (c_d)^k * (kappa/(kd+kappa))^alpha.
double factorial_moment_size_d(int d, int k, const ModelParams& params, int precision_bits = 0);

struct LimitLawParams {
  double kappa = 1.0;
  double alpha = 1.0;
  int d = 1;  // cluster size entering H_alpha; ignored by R_alpha
};

// k-th moments of R_alpha = exp(-Z_alpha/kappa) and H_alpha = exp(-Z_alpha d/kappa).
double limit_moment_R(int k, const LimitLawParams& p);
double limit_moment_H(int k, const LimitLawParams& p);

// Limit law of |I_d|: mixture of Poissons with mixing variable
// Lambda = (alpha/d) * H_alpha (the scale the factorial moments of Prop. 2.2
// force; the paper's display omits it). pmf(k) = E[Lambda^k e^{-Lambda}]/k!,
// evaluated by adaptive double-exponential quadrature to abs error <= 1e-10.
double poisson_mixture_pmf(int k, const LimitLawParams& p);

// c_d^{(alpha)} / (alpha (d-1)! n^{-d}); tends to 1 as n grows.
double cumulant_asymptotic_ratio(int d, const ModelParams& params, int precision_bits = 0);

// nu-measure of one oriented d-gon on K_n: (n+kappa-1)^{-d}.
double dgon_measure(int d, int n, double kappa);

struct LoopMass {
  double exact;          // -log det(I-P), the trace-log mass of nu_n
  double paper_display;  // (n/(n-1)) (-log(1-(n-1)/(n-1+kappa)) - (n-1)/(n-1+kappa))
};
LoopMass loop_mass(int n, double kappa);

// E[theta^M] = (det(I-P)/det(I-theta P))^alpha for the total soup size M.
// Requires 0 <= theta < (n-1+kappa)/(n-1).
double size_gf(double theta, const ModelParams& params);

// Mean number of distinct vertices of a loop of length x: n(1-(1-1/n)^x).
double expected_support(int n, double x);

}  // namespace loopsoup
