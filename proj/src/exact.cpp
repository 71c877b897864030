#include "loopsoup/exact.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>

namespace loopsoup {

namespace {

using boost::multiprecision::cpp_int;

cpp_int binomial_int(int n, int k) {
  if (k < 0 || k > n) return 0;
  cpp_int r = 1;
  for (int i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

}  // namespace

void ModelParams::check() const {
  if (n < 2) throw std::invalid_argument("ModelParams: n must be >= 2");
  if (!(kappa > 0.0)) throw std::invalid_argument("ModelParams: kappa must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("ModelParams: alpha must be positive");
}

int MomentTable::required_bits(int max_order, const ModelParams& params) {
  return static_cast<int>(
             std::ceil(max_order * std::log2(static_cast<double>(params.n) + params.kappa))) +
         64;
}

MomentTable::MomentTable(const ModelParams& params, int max_order, int precision_bits)
    : params_(params), max_order_(max_order), precision_bits_(precision_bits) {
  params_.check();
  if (max_order_ < 1) throw std::invalid_argument("MomentTable: max_order must be >= 1");
  if (static_cast<double>(max_order_) >= params_.n + params_.kappa)
    throw std::domain_error("MomentTable: moments only exist for order < n + kappa");
  const int needed = required_bits(max_order_, params_);
  if (precision_bits_ < needed)
    throw std::invalid_argument("MomentTable: cancellation in the cumulant recursion needs >= " +
                                std::to_string(needed) + " mantissa bits, got " +
                                std::to_string(precision_bits_));

  bf::PrecisionGuard guard(precision_bits_);
  moments_.resize(static_cast<std::size_t>(max_order_) + 1);
  cumulants_.resize(static_cast<std::size_t>(max_order_) + 1);
  moments_[0] = 1;
  const bf::Real total = bf::Real(params_.n) + bf::Real(params_.kappa);  // exact
  for (int j = 1; j <= max_order_; ++j) {
    const bf::Real base = (total - j) / total;  // one rounding
    moments_[static_cast<std::size_t>(j)] = pow(base, -bf::Real(params_.alpha));
  }
  // Pascal row updated in place: binom(j-1, i-1) for the j-th cumulant.
  std::vector<cpp_int> binom{1};
  for (int j = 1; j <= max_order_; ++j) {
    bf::Real c = moments_[static_cast<std::size_t>(j)];
    for (int i = 1; i < j; ++i) {
      c -= bf::Real(binom[static_cast<std::size_t>(i - 1)]) *
           cumulants_[static_cast<std::size_t>(i)] * moments_[static_cast<std::size_t>(j - i)];
    }
    cumulants_[static_cast<std::size_t>(j)] = c;
    binom.push_back(0);
    for (std::size_t i = binom.size() - 1; i > 0; --i) binom[i] += binom[i - 1];
  }
}

const bf::Real& MomentTable::moment(int j) const {
  if (j < 0 || j > max_order_) throw std::out_of_range("MomentTable::moment");
  return moments_[static_cast<std::size_t>(j)];
}

const bf::Real& MomentTable::cumulant(int j) const {
  if (j < 1 || j > max_order_) throw std::out_of_range("MomentTable::cumulant");
  return cumulants_[static_cast<std::size_t>(j)];
}

double MomentTable::moment_d(int j) const { return moment(j).convert_to<double>(); }
double MomentTable::cumulant_d(int j) const { return cumulant(j).convert_to<double>(); }

double moment(int j, const ModelParams& params) {
  params.check();
  if (j < 0) throw std::domain_error("moment: order must be nonnegative");
  const double total = static_cast<double>(params.n) + params.kappa;
  if (static_cast<double>(j) >= total)
    throw std::domain_error("moment: undefined for order >= n + kappa");
  return std::pow(1.0 - static_cast<double>(j) / total, -params.alpha);
}

double log_prob_finer(const Partition& pi, const ModelParams& params) {
  params.check();
  if (pi.ground_size() != params.n)
    throw std::invalid_argument("prob_finer: partition does not match n");
  const double total = static_cast<double>(params.n) + params.kappa;
  double log_ratio = std::log(params.kappa) - std::log(params.kappa + params.n);
  for (const auto& b : pi.blocks())
    log_ratio -= std::log1p(-static_cast<double>(b.size()) / total);
  return params.alpha * log_ratio;
}

double prob_finer(const Partition& pi, const ModelParams& params) {
  return std::exp(log_prob_finer(pi, params));
}

double prob_exact(const Partition& pi, const ModelParams& params, std::uint64_t enumeration_cap) {
  params.check();
  double sum = 0.0;
  for_each_refinement(
      pi,
      [&](const Partition& fine) {
        sum += static_cast<double>(mobius_weight(fine, pi)) * prob_finer(fine, params);
      },
      enumeration_cap);
  return sum;
}

double prob_connected(const ModelParams& params, int precision_bits) {
  params.check();
  const int bits = std::max(precision_bits, MomentTable::required_bits(params.n, params));
  MomentTable table(params, params.n, bits);
  bf::PrecisionGuard guard(bits);
  const bf::Real ratio = table.cumulant(params.n) / table.moment(params.n);
  return ratio.convert_to<double>();
}

double prob_isolated_sets(std::span<const int> sizes, const ModelParams& params) {
  params.check();
  long long total_size = 0;
  for (int d : sizes) {
    if (d < 1) throw std::invalid_argument("prob_isolated_sets: sizes must be positive");
    total_size += d;
  }
  if (total_size > params.n)
    throw std::invalid_argument("prob_isolated_sets: sizes exceed the vertex count");
  const double total = static_cast<double>(params.n) + params.kappa;
  // log m_j = -alpha log(1 - j/(n+kappa)); remainder block may be empty (m_0 = 1).
  double log_value = 0.0;
  for (int d : sizes) log_value += -std::log1p(-static_cast<double>(d) / total);
  const long long rest = params.n - total_size;
  if (rest > 0) log_value += -std::log1p(-static_cast<double>(rest) / total);
  log_value -= -std::log1p(-static_cast<double>(params.n) / total);
  return std::exp(params.alpha * log_value);
}

double factorial_moment_isolated_vertices(int k, const ModelParams& params) {
  params.check();
  if (k < 0) throw std::invalid_argument("factorial_moment_isolated_vertices: k must be >= 0");
  if (k == 0) return 1.0;
  if (k > params.n) return 0.0;  // falling factorial vanishes
  double falling = 1.0;
  for (int j = 0; j < k; ++j) falling *= static_cast<double>(params.n - j);
  const double total = static_cast<double>(params.n) + params.kappa;
  const double log_rest = params.alpha * (std::log(params.kappa) - std::log(k + params.kappa)) -
                          k * params.alpha * std::log1p(-1.0 / total);
  return falling * std::exp(log_rest);
}

double factorial_moment_size_d(int d, int k, const ModelParams& params, int precision_bits) {
  params.check();
  if (d < 1 || k < 0) throw std::invalid_argument("factorial_moment_size_d: need d >= 1, k >= 0");
  if (k == 0) return 1.0;
  if (static_cast<long long>(k) * d > params.n) return 0.0;
  const int bits = std::max(precision_bits, MomentTable::required_bits(d, params));
  MomentTable table(params, d, bits);
  bf::PrecisionGuard guard(bits);
  bf::Real value = pow(bf::Real(params.kappa) / (bf::Real(k) * d + params.kappa),
                       bf::Real(params.alpha));
  value *= pow(table.cumulant(d), k);
  for (int j = 0; j < k; ++j) value *= bf::Real(binomial_int(params.n - j * d, d));
  return value.convert_to<double>();
}

double limit_moment_R(int k, const LimitLawParams& p) {
  if (k < 0) throw std::invalid_argument("limit_moment_R: k must be >= 0");
  return std::pow(p.kappa / (k + p.kappa), p.alpha);
}

double limit_moment_H(int k, const LimitLawParams& p) {
  if (k < 0) throw std::invalid_argument("limit_moment_H: k must be >= 0");
  return std::pow(p.kappa / (static_cast<double>(k) * p.d + p.kappa), p.alpha);
}

double poisson_mixture_pmf(int k, const LimitLawParams& p) {
  if (k < 0) throw std::invalid_argument("poisson_mixture_pmf: k must be >= 0");
  if (p.d < 1 || !(p.kappa > 0.0) || !(p.alpha > 0.0))
    throw std::invalid_argument("poisson_mixture_pmf: invalid parameters");
  // Integrate over z ~ Gamma(alpha, 1): Lambda(z) = (alpha/d) e^{-dz/kappa}.
  const double lgamma_alpha = std::lgamma(p.alpha);
  const double lfact_k = std::lgamma(static_cast<double>(k) + 1.0);
  const double scale = p.alpha / static_cast<double>(p.d);
  auto integrand = [&](double z) {
    const double log_lambda = std::log(scale) - static_cast<double>(p.d) * z / p.kappa;
    const double lambda = std::exp(log_lambda);
    double log_f = k * log_lambda - lambda - lfact_k - z - lgamma_alpha;
    if (p.alpha != 1.0) log_f += (p.alpha - 1.0) * std::log(z);
    return std::exp(log_f);
  };
  double err1 = 0.0;
  double err2 = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  boost::math::quadrature::tanh_sinh<double> finite;
  const double head = finite.integrate(integrand, 0.0, 1.0, 1e-12, &err1, &l1, &levels);
  boost::math::quadrature::exp_sinh<double> tail;
  const double rest = tail.integrate(integrand, 1.0,
                                     std::numeric_limits<double>::infinity(), 1e-12, &err2);
  const double value = head + rest;
  if (!(std::isfinite(value)) || err1 * l1 + err2 * std::abs(rest) > 1e-10)
    throw std::runtime_error("poisson_mixture_pmf: quadrature did not converge to 1e-10");
  return value;
}

double cumulant_asymptotic_ratio(int d, const ModelParams& params, int precision_bits) {
  params.check();
  if (d < 2) throw std::invalid_argument("cumulant_asymptotic_ratio: d must be >= 2");
  const int bits = std::max(precision_bits, MomentTable::required_bits(d, params));
  MomentTable table(params, d, bits);
  bf::PrecisionGuard guard(bits);
  bf::Real target = bf::Real(params.alpha);
  for (int i = 2; i < d; ++i) target *= i;  // (d-1)!
  target *= pow(bf::Real(params.n), -d);
  const bf::Real ratio = table.cumulant(d) / target;
  return ratio.convert_to<double>();
}

double dgon_measure(int d, int n, double kappa) {
  if (d < 2 || d > n) throw std::invalid_argument("dgon_measure: need 2 <= d <= n");
  if (!(kappa > 0.0)) throw std::invalid_argument("dgon_measure: kappa must be positive");
  return std::pow(static_cast<double>(n) + kappa - 1.0, -static_cast<double>(d));
}

LoopMass loop_mass(int n, double kappa) {
  if (n < 2) throw std::invalid_argument("loop_mass: n must be >= 2");
  if (!(kappa > 0.0)) throw std::invalid_argument("loop_mass: kappa must be positive");
  const double m = static_cast<double>(n) - 1.0 + kappa;  // n - 1 + kappa
  const double q = (static_cast<double>(n) - 1.0) / m;
  const double s = 1.0 / m;
  LoopMass out;
  out.exact = -std::log1p(-q) - (static_cast<double>(n) - 1.0) * std::log1p(s);
  out.paper_display = (static_cast<double>(n) / (static_cast<double>(n) - 1.0)) *
                      (-std::log1p(-q) - q);
  return out;
}

double size_gf(double theta, const ModelParams& params) {
  params.check();
  const double m = static_cast<double>(params.n) - 1.0 + params.kappa;
  const double q = (static_cast<double>(params.n) - 1.0) / m;  // top eigenvalue of P
  const double s = 1.0 / m;                                    // -s has multiplicity n-1
  if (theta < 0.0 || theta * q >= 1.0)
    throw std::domain_error("size_gf: need 0 <= theta < (n-1+kappa)/(n-1)");
  const double log_num = std::log1p(-q) + (params.n - 1.0) * std::log1p(s);
  const double log_den = std::log1p(-theta * q) + (params.n - 1.0) * std::log1p(theta * s);
  return std::exp(params.alpha * (log_num - log_den));
}

double expected_support(int n, double x) {
  if (n < 2) throw std::invalid_argument("expected_support: n must be >= 2");
  if (x < 2.0) throw std::invalid_argument("expected_support: x must be >= 2");
  // n(1 - (1-1/n)^x), stably via expm1.
  return -static_cast<double>(n) * std::expm1(x * std::log1p(-1.0 / static_cast<double>(n)));
}

}  // namespace loopsoup
