// stats.hpp — Monte Carlo estimators and goodness-of-fit utilities.
#pragma once

#include <span>
#include <vector>

namespace loopsoup::stats {

// Streaming mean/variance (Welford).
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);  // order-sensitive only at roundoff level
  long long count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // sample variance (n-1 denominator)
  double stderr_of_mean() const;

 private:
  long long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double falling_factorial(double x, int k);

struct MeanStderr {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  long long count = 0;
};

// Sample mean and standard error of X(X-1)...(X-k+1) over count samples.
MeanStderr estimate_falling_factorial(std::span<const long long> counts, int k);

// Two-sided KS statistic against Uniform[0,1]; inputs are clamped through the
// uniform CDF so values outside [0,1] land on the flat parts.
double ks_uniform(std::span<const double> values);

// Critical value via the asymptotic tail Q(x) ~ 2 e^{-2 n x^2}: the classic
// sqrt(-log(alpha/2) / 2n). Good to ~1e-6 absolute for alpha <= 0.1, n >= 35.
double ks_critical_value(std::size_t n, double alpha);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
  int merged_bins = 0;
};

// Pearson chi-square with adjacent-bin merging until every expected count is
// >= 5. Throws on degenerate inputs (mismatched sizes, nonpositive totals).
ChiSquareResult chi_square(std::span<const double> observed, std::span<const double> expected);

// Two-sample chi-square on a pair of histograms (possibly different totals).
ChiSquareResult chi_square_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace loopsoup::stats
