#include "loopsoup/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loopsoup {

namespace {

void check_walk(const std::vector<int>& walk) {
  const std::size_t k = walk.size();
  if (k < 2) throw std::invalid_argument("Loop: length must be >= 2");
  for (std::size_t i = 0; i < k; ++i) {
    if (walk[i] < 0) throw std::invalid_argument("Loop: negative vertex index");
    if (walk[i] == walk[(i + 1) % k])
      throw std::invalid_argument("Loop: consecutive vertices equal (including wrap-around)");
  }
}

int sample_cdf(const std::vector<double>& cdf, rng::Engine& e) {
  const double u = rng::unit(e) * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                   static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

}  // namespace

std::size_t least_rotation(std::span<const int> s) {
  const std::size_t n = s.size();
  std::size_t i = 0;
  std::size_t j = 1;
  std::size_t k = 0;
  while (i < n && j < n && k < n) {
    const int a = s[(i + k) % n];
    const int b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
      if (i == j) ++i;
    } else {
      j += k + 1;
      if (i == j) ++j;
    }
    k = 0;
  }
  return std::min(i, j);
}

Loop Loop::from_walk(std::vector<int> walk) {
  check_walk(walk);
  const std::size_t r = least_rotation(walk);
  std::rotate(walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(r), walk.end());
  Loop loop;
  loop.vertices = std::move(walk);
  return loop;
}

Loop primitive_root(const Loop& loop) {
  const auto& v = loop.vertices;
  const std::size_t k = v.size();
  // KMP prefix function; smallest period p = k - pi[k-1] when it divides k.
  std::vector<std::size_t> pi(k, 0);
  for (std::size_t i = 1; i < k; ++i) {
    std::size_t j = pi[i - 1];
    while (j > 0 && v[i] != v[j]) j = pi[j - 1];
    if (v[i] == v[j]) ++j;
    pi[i] = j;
  }
  const std::size_t p = k - pi[k - 1];
  if (k % p != 0 || p == k) return loop;
  return Loop::from_walk(std::vector<int>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(p)));
}

nlohmann::json LoopConfig::to_json() const {
  nlohmann::json j;
  auto arr = nlohmann::json::array();
  for (const auto& l : loops) arr.push_back(l.vertices);
  j["loops"] = std::move(arr);
  j["total_size"] = total_size;
  return j;
}

LoopConfig LoopConfig::from_json(const nlohmann::json& j) {
  LoopConfig c;
  for (const auto& l : j.at("loops")) c.loops.push_back(Loop::from_walk(l.get<std::vector<int>>()));
  c.total_size = j.at("total_size").get<long long>();
  long long check = 0;
  for (const auto& l : c.loops) check += l.length();
  if (check != c.total_size)
    throw std::invalid_argument("LoopConfig: total_size does not match the loops");
  return c;
}

void SamplerSettings::check() const {
  if (!(tail_cutoff_epsilon > 0.0) || tail_cutoff_epsilon > 0x1.0p-20)
    throw std::invalid_argument("SamplerSettings: tail_cutoff_epsilon must lie in (0, 2^-20]");
  if (general_cap < 2) throw std::invalid_argument("SamplerSettings: general_cap must be >= 2");
}

LengthTable LengthTable::complete(int n, double kappa, double cutoff) {
  if (n < 2 || !(kappa > 0.0)) throw std::invalid_argument("LengthTable: invalid parameters");
  LengthTable t;
  const double m = static_cast<double>(n) - 1.0 + kappa;
  const double q = (static_cast<double>(n) - 1.0) / m;
  const double s = 1.0 / m;
  t.exact_mass_ = -std::log1p(-q) - (static_cast<double>(n) - 1.0) * std::log1p(s);
  double qk = q * q;
  double sk = s * s;
  double sign = 1.0;
  double acc = 0.0;
  for (int k = 2;; ++k) {
    const double wk = std::max(0.0, (qk + (static_cast<double>(n) - 1.0) * sign * sk) /
                                        static_cast<double>(k));
    acc += wk;
    t.cdf_.push_back(acc);
    // Tail bound: sum_{j>k} w_j <= 2 q^{k+1} / ((k+1)(1-q)).
    const double tail = 2.0 * qk * q / ((static_cast<double>(k) + 1.0) * (1.0 - q));
    if (k >= 3 && tail < cutoff * t.exact_mass_) break;
    if (t.cdf_.size() > (1u << 27))
      throw std::length_error("LengthTable: cutoff needs more than 2^27 length entries");
    qk *= q;
    sk *= s;
    sign = -sign;
  }
  return t;
}

LengthTable LengthTable::from_spectrum(std::span<const double> eigenvalues, double cutoff) {
  LengthTable t;
  const int n = static_cast<int>(eigenvalues.size());
  double rho = 0.0;
  t.exact_mass_ = 0.0;
  std::vector<double> pw(eigenvalues.begin(), eigenvalues.end());
  for (double lam : eigenvalues) {
    rho = std::max(rho, std::abs(lam));
    t.exact_mass_ -= std::log1p(-lam);
  }
  if (!(rho < 1.0)) throw std::invalid_argument("LengthTable: spectral radius must be < 1");
  double acc = 0.0;
  for (int k = 2;; ++k) {
    double trace = 0.0;
    for (std::size_t i = 0; i < pw.size(); ++i) {
      pw[i] *= eigenvalues[i];
      trace += pw[i];
    }
    const double wk = std::max(0.0, trace / static_cast<double>(k));
    acc += wk;
    t.cdf_.push_back(acc);
    const double tail =
        n * std::pow(rho, k + 1) / ((static_cast<double>(k) + 1.0) * (1.0 - rho));
    if (k >= 3 && tail < cutoff * t.exact_mass_) break;
    if (t.cdf_.size() > (1u << 27))
      throw std::length_error("LengthTable: cutoff needs more than 2^27 length entries");
  }
  return t;
}

double LengthTable::weight(int k) const {
  const int idx = k - 2;
  if (idx < 0 || idx >= static_cast<int>(cdf_.size())) return 0.0;
  return idx == 0 ? cdf_[0] : cdf_[static_cast<std::size_t>(idx)] - cdf_[static_cast<std::size_t>(idx - 1)];
}

int LengthTable::sample(rng::Engine& e) const { return sample_cdf(cdf_, e) + 2; }

double CompleteSoupSampler::closed_walk_count(int n, int r, bool same_endpoint) {
  if (n < 2 || r < 0) throw std::invalid_argument("closed_walk_count: invalid arguments");
  const double sign = (r % 2 == 0) ? 1.0 : -1.0;
  const double base = std::pow(static_cast<double>(n) - 1.0, r);
  if (same_endpoint) return (base + (static_cast<double>(n) - 1.0) * sign) / n;
  return (base - sign) / n;
}

namespace {
SamplerSettings checked(SamplerSettings s) {
  s.check();
  return s;
}
}  // namespace

CompleteSoupSampler::CompleteSoupSampler(int n, double kappa, double alpha,
                                         SamplerSettings settings)
    : n_(n),
      kappa_(kappa),
      alpha_(alpha),
      settings_(checked(settings)),
      table_(LengthTable::complete(n, kappa, settings_.tail_cutoff_epsilon)) {
  if (!(alpha_ > 0.0)) throw std::invalid_argument("CompleteSoupSampler: alpha must be positive");
  // Exact integer walk-count ratios while (n-1)^r fits in ~100 bits; the
  // table never needs more than max_length entries.
  const unsigned __int128 limit = static_cast<unsigned __int128>(1) << 100;
  const unsigned __int128 base = static_cast<unsigned __int128>(n_ - 1);
  unsigned __int128 pw = 1;
  for (int r = 0; r < table_.max_length(); ++r) {
    // walk counts scaled by n: A = (n-1)^r + (n-1)(-1)^r, B = (n-1)^r - (-1)^r
    unsigned __int128 a;
    unsigned __int128 b;
    if (r % 2 == 0) {
      a = pw + base;
      b = pw - 1;  // pw >= 1
    } else {
      a = pw - base;  // pw = (n-1)^r >= n-1 for r >= 1
      b = pw + 1;
    }
    const unsigned __int128 denom = a + static_cast<unsigned __int128>(n_ - 2) * b;
    // denom == 0 only in bridge states that cannot be reached (K_2 with an
    // odd number of remaining steps from off-base).
    p_target_.push_back(denom == 0 ? 1.0
                                   : static_cast<double>(a) / static_cast<double>(denom));
    if (pw > limit / (base == 0 ? 1 : base)) break;
    pw *= base;
  }
}

void CompleteSoupSampler::sample_walk_of_length(rng::Engine& e, int k,
                                                std::vector<int>& out) const {
  if (k < 2 || (n_ == 2 && k % 2 != 0))
    throw std::invalid_argument("sample_walk_of_length: no closed walks of that length");
  out.clear();
  out.reserve(static_cast<std::size_t>(k));
  const int x = rng::below(e, n_);
  out.push_back(x);
  int v = x;
  for (int step = 1; step < k; ++step) {
    if (v == x) {
      const int w = rng::below(e, n_ - 1);
      v = w < x ? w : w + 1;
    } else {
      const int r = k - step;  // edges remaining after this choice
      const double pt = r < static_cast<int>(p_target_.size())
                            ? p_target_[static_cast<std::size_t>(r)]
                            : 1.0 / (static_cast<double>(n_) - 1.0);
      if (rng::unit(e) < pt) {
        v = x;
      } else {
        int w = rng::below(e, n_ - 2);
        const int lo = std::min(v, x);
        const int hi = std::max(v, x);
        if (w >= lo) ++w;
        if (w >= hi) ++w;
        v = w;
      }
    }
    out.push_back(v);
  }
}

void CompleteSoupSampler::sample_walk(rng::Engine& e, std::vector<int>& out) const {
  sample_walk_of_length(e, table_.sample(e), out);
}

Loop CompleteSoupSampler::sample_loop(rng::Engine& e) const {
  std::vector<int> walk;
  sample_walk(e, walk);
  return Loop::from_walk(std::move(walk));
}

LoopConfig CompleteSoupSampler::sample_soup(rng::Engine& e) const {
  LoopConfig config;
  const long long count = rng::poisson(e, soup_rate());
  config.loops.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    config.loops.push_back(sample_loop(e));
    config.total_size += config.loops.back().length();
  }
  return config;
}

GeneralSoupSampler::GeneralSoupSampler(const GraphSpec& g, double alpha, SamplerSettings settings)
    : n_(g.size()), alpha_(alpha), settings_(checked(settings)) {
  if (!(alpha_ > 0.0)) throw std::invalid_argument("GeneralSoupSampler: alpha must be positive");
  if (n_ > settings_.general_cap)
    throw std::length_error("GeneralSoupSampler: graph has " + std::to_string(n_) +
                            " vertices, cap is " + std::to_string(settings_.general_cap));
  // Real spectrum via the symmetrization M = D^{1/2} P D^{-1/2}.
  Eigen::VectorXd root = g.lambda().array().sqrt();
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = g.conductances()(i, j) / (root(i) * root(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> eigenvalues(es.eigenvalues().data(), es.eigenvalues().data() + n_);
  table_ = LengthTable::from_spectrum(eigenvalues, settings_.tail_cutoff_epsilon);

  const int max_len = table_.max_length();
  const std::size_t table_doubles = static_cast<std::size_t>(max_len + 1) *
                                    static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  if (table_doubles > (1u << 27))
    throw std::length_error("GeneralSoupSampler: matrix-power table needs " +
                            std::to_string(table_doubles) + " doubles; lower the cutoff or n");
  Eigen::MatrixXd p = g.conductances().array().colwise() / g.lambda().array();
  powers_.reserve(static_cast<std::size_t>(max_len) + 1);
  powers_.push_back(Eigen::MatrixXd::Identity(n_, n_));
  for (int r = 1; r <= max_len; ++r) powers_.push_back(powers_.back() * p);
  base_cdf_.assign(static_cast<std::size_t>(max_len) + 1, {});
  for (int k = 2; k <= max_len; ++k) {
    auto& cdf = base_cdf_[static_cast<std::size_t>(k)];
    cdf.resize(static_cast<std::size_t>(n_));
    double acc = 0.0;
    for (int x = 0; x < n_; ++x) {
      acc += std::max(0.0, powers_[static_cast<std::size_t>(k)](x, x));
      cdf[static_cast<std::size_t>(x)] = acc;
    }
  }
}

void GeneralSoupSampler::sample_walk_of_length(rng::Engine& e, int k,
                                               std::vector<int>& out) const {
  if (k < 2 || k > table_.max_length())
    throw std::invalid_argument("sample_walk_of_length: length outside the table");
  if (!(table_.weight(k) > 0.0))
    throw std::invalid_argument("sample_walk_of_length: no closed walks of that length");
  out.clear();
  out.reserve(static_cast<std::size_t>(k));
  const auto& pmat = powers_[1];
  const int x = sample_cdf(base_cdf_[static_cast<std::size_t>(k)], e);
  out.push_back(x);
  int v = x;
  std::vector<double> weights(static_cast<std::size_t>(n_));
  for (int step = 1; step < k; ++step) {
    const int r = k - step;
    const auto& pr = powers_[static_cast<std::size_t>(r)];
    double acc = 0.0;
    for (int w = 0; w < n_; ++w) {
      acc += pmat(v, w) * std::max(0.0, pr(w, x));
      weights[static_cast<std::size_t>(w)] = acc;
    }
    const double u = rng::unit(e) * acc;
    int w = 0;
    while (w < n_ - 1 && weights[static_cast<std::size_t>(w)] <= u) ++w;
    v = w;
    out.push_back(v);
  }
}

void GeneralSoupSampler::sample_walk(rng::Engine& e, std::vector<int>& out) const {
  sample_walk_of_length(e, table_.sample(e), out);
}

Loop GeneralSoupSampler::sample_loop(rng::Engine& e) const {
  std::vector<int> walk;
  sample_walk(e, walk);
  return Loop::from_walk(std::move(walk));
}

LoopConfig GeneralSoupSampler::sample_soup(rng::Engine& e) const {
  LoopConfig config;
  const long long count = rng::poisson(e, soup_rate());
  config.loops.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    config.loops.push_back(sample_loop(e));
    config.total_size += config.loops.back().length();
  }
  return config;
}

std::vector<Loop> project_primitive(const LoopConfig& config) {
  std::vector<Loop> roots;
  roots.reserve(config.loops.size());
  for (const auto& l : config.loops) roots.push_back(primitive_root(l));
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace loopsoup
