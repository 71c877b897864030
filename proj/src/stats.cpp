#include "loopsoup/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace loopsoup::stats {

void Accumulator::add(double x) {
  ++n_;
  const double d1 = x - mean_;
  mean_ += d1 / static_cast<double>(n_);
  m2_ += d1 * (x - mean_);
}

void Accumulator::merge(const Accumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double delta = other.mean_ - mean_;
  const double total = static_cast<double>(n_ + other.n_);
  m2_ += other.m2_ + delta * delta * static_cast<double>(n_) *
                         static_cast<double>(other.n_) / total;
  mean_ += delta * static_cast<double>(other.n_) / total;
  n_ += other.n_;
}

double Accumulator::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double Accumulator::stderr_of_mean() const {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double falling_factorial(double x, int k) {
  double v = 1.0;
  for (int j = 0; j < k; ++j) v *= x - static_cast<double>(j);
  return v;
}

MeanStderr estimate_falling_factorial(std::span<const long long> counts, int k) {
  if (k < 1) throw std::invalid_argument("estimate_falling_factorial: k must be >= 1");
  if (counts.empty()) throw std::invalid_argument("estimate_falling_factorial: empty sample");
  Accumulator acc;
  for (long long x : counts) acc.add(falling_factorial(static_cast<double>(x), k));
  return MeanStderr{acc.mean(), acc.stderr_of_mean(), acc.count()};
}

double ks_uniform(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("ks_uniform: empty sample");
  std::vector<double> q(values.begin(), values.end());
  for (double& v : q) v = std::clamp(v, 0.0, 1.0);
  std::sort(q.begin(), q.end());
  const double n = static_cast<double>(q.size());
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double hi = (static_cast<double>(i) + 1.0) / n - q[i];
    const double lo = q[i] - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("ks_critical_value: empty sample");
  if (!(alpha > 0.0) || alpha >= 1.0)
    throw std::invalid_argument("ks_critical_value: alpha must lie in (0,1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0) / static_cast<double>(n));
}

namespace {

ChiSquareResult chi_square_merged(std::vector<std::pair<double, double>> bins) {
  // bins: (observed, expected); merge adjacent until expected >= 5.
  std::vector<std::pair<double, double>> merged;
  std::pair<double, double> pending{0.0, 0.0};
  for (const auto& b : bins) {
    pending.first += b.first;
    pending.second += b.second;
    if (pending.second >= 5.0) {
      merged.push_back(pending);
      pending = {0.0, 0.0};
    }
  }
  if (pending.second > 0.0 || pending.first > 0.0) {
    if (merged.empty()) throw std::invalid_argument("chi_square: expected counts too small");
    merged.back().first += pending.first;
    merged.back().second += pending.second;
  }
  if (merged.size() < 2) throw std::invalid_argument("chi_square: fewer than 2 usable bins");
  ChiSquareResult r;
  r.merged_bins = static_cast<int>(merged.size());
  r.dof = static_cast<int>(merged.size()) - 1;
  for (const auto& [obs, exp] : merged) {
    const double diff = obs - exp;
    r.statistic += diff * diff / exp;
  }
  r.p_value = boost::math::gamma_q(static_cast<double>(r.dof) / 2.0, r.statistic / 2.0);
  return r;
}

}  // namespace

ChiSquareResult chi_square(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi_square: need matching nonempty histograms");
  double tot_obs = 0.0;
  double tot_exp = 0.0;
  std::vector<std::pair<double, double>> bins;
  bins.reserve(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < 0.0 || observed[i] < 0.0)
      throw std::invalid_argument("chi_square: negative counts");
    tot_obs += observed[i];
    tot_exp += expected[i];
    bins.emplace_back(observed[i], expected[i]);
  }
  if (!(tot_obs > 0.0) || !(tot_exp > 0.0))
    throw std::invalid_argument("chi_square: empty histograms");
  return chi_square_merged(std::move(bins));
}

ChiSquareResult chi_square_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("chi_square_two_sample: need matching nonempty histograms");
  double ta = 0.0;
  double tb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ta += a[i];
    tb += b[i];
  }
  if (!(ta > 0.0) || !(tb > 0.0))
    throw std::invalid_argument("chi_square_two_sample: empty histograms");
  // Statistic sum_i (a_i sqrt(tb/ta) - b_i sqrt(ta/tb))^2 / (a_i + b_i),
  // chi-square with bins-1 dof under equality. Bins with a_i + b_i < 5 are
  // merged like the one-sample case.
  const double ra = std::sqrt(tb / ta);
  const double rb = std::sqrt(ta / tb);
  std::vector<std::pair<double, double>> bins;  // reuse merger on (a, b) pair sums
  bins.reserve(a.size());
  std::vector<std::pair<double, double>> merged;
  std::pair<double, double> pending{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    pending.first += a[i];
    pending.second += b[i];
    if (pending.first + pending.second >= 5.0) {
      merged.push_back(pending);
      pending = {0.0, 0.0};
    }
  }
  if ((pending.first > 0.0 || pending.second > 0.0) && !merged.empty()) {
    merged.back().first += pending.first;
    merged.back().second += pending.second;
  }
  if (merged.size() < 2) throw std::invalid_argument("chi_square_two_sample: fewer than 2 usable bins");
  ChiSquareResult r;
  r.merged_bins = static_cast<int>(merged.size());
  r.dof = static_cast<int>(merged.size()) - 1;
  for (const auto& [ai, bi] : merged) {
    const double diff = ai * ra - bi * rb;
    r.statistic += diff * diff / (ai + bi);
  }
  r.p_value = boost::math::gamma_q(static_cast<double>(r.dof) / 2.0, r.statistic / 2.0);
  return r;
}

}  // namespace loopsoup::stats
