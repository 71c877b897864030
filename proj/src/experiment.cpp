#include "loopsoup/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "loopsoup/cluster.hpp"
#include "loopsoup/er.hpp"
#include "loopsoup/sampler.hpp"
#include "loopsoup/stats.hpp"

namespace loopsoup {

namespace {

constexpr double kZBand = 4.0;
constexpr double kPValueFloor = 0.001;

struct BatchData {
  std::vector<stats::Accumulator> accs;
  std::vector<double> raw;
  std::vector<long long> hist;

  void merge(const BatchData& other) {
    if (accs.size() < other.accs.size()) accs.resize(other.accs.size());
    for (std::size_t i = 0; i < other.accs.size(); ++i) accs[i].merge(other.accs[i]);
    raw.insert(raw.end(), other.raw.begin(), other.raw.end());
    if (hist.size() < other.hist.size()) hist.resize(other.hist.size(), 0);
    for (std::size_t i = 0; i < other.hist.size(); ++i) hist[i] += other.hist[i];
  }
};

// Runs fn(batch_index, batch_samples, engine) across worker threads; results
// are merged strictly in batch order.
template <typename Fn>
BatchData run_batches(const ExperimentConfig& config, Fn&& fn) {
  const int batches = config.batches;
  std::vector<BatchData> partial(static_cast<std::size_t>(batches));
  const int workers = std::max(1, std::min(max_worker_threads(), batches));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int b = w; b < batches; b += workers) {
        const long long share = config.samples / batches +
                                (b < config.samples % batches ? 1 : 0);
        rng::Engine engine = rng::make_stream(config.seed, static_cast<std::uint64_t>(b));
        partial[static_cast<std::size_t>(b)] = fn(b, share, engine);
      }
    });
  }
  for (auto& t : pool) t.join();
  BatchData merged;
  for (const auto& p : partial) merged.merge(p);
  return merged;
}

StatRow row_z_band(std::string name, double exact, const stats::Accumulator& acc) {
  StatRow r;
  r.name = std::move(name);
  r.exact = exact;
  r.estimate = acc.mean();
  r.stderr_of_mean = acc.stderr_of_mean();
  if (r.stderr_of_mean > 0.0) {
    r.z = (r.estimate - exact) / r.stderr_of_mean;
    r.ok = std::abs(r.z) <= kZBand;
  } else {
    r.z = 0.0;
    r.ok = r.estimate == exact;
  }
  r.band = "|z| <= 4";
  return r;
}

StatRow row_relative(std::string name, double exact, double estimate, double stderr_of_mean,
                     double rel_tol) {
  StatRow r;
  r.name = std::move(name);
  r.exact = exact;
  r.estimate = estimate;
  r.stderr_of_mean = stderr_of_mean;
  r.z = stderr_of_mean > 0.0 ? (estimate - exact) / stderr_of_mean : 0.0;
  r.ok = std::abs(estimate / exact - 1.0) <= rel_tol;
  std::ostringstream os;
  os << "|rel err| <= " << rel_tol;
  r.band = os.str();
  return r;
}

StatRow row_abs(std::string name, double exact, double estimate, double abs_tol) {
  StatRow r;
  r.name = std::move(name);
  r.exact = exact;
  r.estimate = estimate;
  r.ok = std::abs(estimate - exact) <= abs_tol;
  std::ostringstream os;
  os << "|err| <= " << abs_tol;
  r.band = os.str();
  return r;
}

StatRow row_p_value(std::string name, const stats::ChiSquareResult& chi) {
  StatRow r;
  r.name = std::move(name);
  r.exact = kPValueFloor;
  r.estimate = chi.p_value;
  r.z = chi.statistic;  // informational: the statistic itself
  r.ok = chi.p_value > kPValueFloor;
  r.band = "p > 0.001";
  return r;
}

Partition target_partition(const ExperimentConfig& config) {
  if (config.partition) {
    if (config.partition->ground_size() != config.model.n)
      throw std::invalid_argument("experiment: partition ground size does not match n");
    return *config.partition;
  }
  return Partition::singletons(config.model.n);
}

bool walk_stays_within_blocks(const std::vector<int>& walk, const Partition& pi) {
  const std::size_t k = walk.size();
  const int block = pi.block_of(walk[0]);
  for (std::size_t i = 0; i < k; ++i) {
    if (pi.block_of(walk[i]) != block) return false;
  }
  return true;
}

ExperimentReport finish(const ExperimentConfig& config, std::vector<StatRow> rows,
                        std::chrono::steady_clock::time_point start) {
  ExperimentReport rep;
  rep.config_echo = config.to_json();
  rep.rows = std::move(rows);
  rep.samples = config.samples;
  rep.seed = config.seed;
  rep.precision_bits = config.precision_bits;
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

ExperimentReport run_finer_prob(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Partition pi = target_partition(config);
  const double exact = prob_finer(pi, config.model);
  CompleteSoupSampler sampler(config.model.n, config.model.kappa, config.model.alpha);
  BatchData data = run_batches(config, [&](int, long long share, rng::Engine& e) {
    BatchData out;
    out.accs.resize(1);
    std::vector<int> buf;
    for (long long s = 0; s < share; ++s) {
      bool finer = true;
      sampler.sample_soup_walks(e, buf, [&](const std::vector<int>& walk) {
        if (finer) finer = walk_stays_within_blocks(walk, pi);
      });
      out.accs[0].add(finer ? 1.0 : 0.0);
    }
    return out;
  });
  std::vector<StatRow> rows;
  rows.push_back(row_z_band("prob_finer[" + pi.to_string() + "]", exact, data.accs[0]));
  return finish(config, std::move(rows), start);
}

ExperimentReport run_exact_prob(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Partition pi = target_partition(config);
  const auto all = all_partitions(config.model.n);
  std::map<Partition, int> index;
  for (std::size_t i = 0; i < all.size(); ++i) index[all[i]] = static_cast<int>(i);
  std::vector<double> exact_probs(all.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    exact_probs[i] = prob_exact(all[i], config.model);
    sum += exact_probs[i];
  }
  const double p_connected = prob_connected(config.model, config.precision_bits);
  const double p_single = prob_exact(Partition::single_block(config.model.n), config.model);
  const double p_pi = exact_probs[static_cast<std::size_t>(index.at(pi))];

  CompleteSoupSampler sampler(config.model.n, config.model.kappa, config.model.alpha);
  BatchData data = run_batches(config, [&](int, long long share, rng::Engine& e) {
    BatchData out;
    out.accs.resize(2);  // [0] connected indicator, [1] C == pi indicator
    out.hist.assign(all.size(), 0);
    ClusterBuilder builder(config.model.n);
    std::vector<int> buf;
    for (long long s = 0; s < share; ++s) {
      builder.reset();
      sampler.sample_soup_walks(e, buf,
                                [&](const std::vector<int>& walk) { builder.add_walk(walk); });
      const Partition c = builder.partition();
      const int idx = index.at(c);
      ++out.hist[static_cast<std::size_t>(idx)];
      out.accs[0].add(c.block_count() == 1 ? 1.0 : 0.0);
      out.accs[1].add(c == pi ? 1.0 : 0.0);
    }
    return out;
  });

  std::vector<StatRow> rows;
  rows.push_back(row_abs("sum_over_partitions_of_prob_exact", 1.0, sum, 1e-9));
  rows.push_back(
      row_abs("prob_connected_vs_prob_exact_single_block", p_single, p_connected, 1e-9));
  rows.push_back(row_z_band("prob_connected_mc", p_connected, data.accs[0]));
  rows.push_back(row_z_band("prob_exact_mc[" + pi.to_string() + "]", p_pi, data.accs[1]));
  std::vector<double> observed(all.size());
  std::vector<double> expected(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    observed[i] = static_cast<double>(data.hist[i]);
    expected[i] = exact_probs[i] * static_cast<double>(config.samples);
  }
  rows.push_back(row_p_value("partition_distribution_chi_square",
                             stats::chi_square(observed, expected)));
  return finish(config, std::move(rows), start);
}

ExperimentReport run_isolated_moments(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CompleteSoupSampler sampler(config.model.n, config.model.kappa, config.model.alpha);
  const int kmax = config.k;
  BatchData data = run_batches(config, [&](int, long long share, rng::Engine& e) {
    BatchData out;
    out.accs.resize(static_cast<std::size_t>(kmax));
    ClusterBuilder builder(config.model.n);
    std::vector<int> buf;
    std::vector<int> sizes;
    for (long long s = 0; s < share; ++s) {
      builder.reset();
      sampler.sample_soup_walks(e, buf,
                                [&](const std::vector<int>& walk) { builder.add_walk(walk); });
      builder.component_sizes(sizes);
      long long isolated = 0;
      for (int sz : sizes)
        if (sz == 1) ++isolated;
      for (int k = 1; k <= kmax; ++k)
        out.accs[static_cast<std::size_t>(k - 1)].add(
            stats::falling_factorial(static_cast<double>(isolated), k));
    }
    return out;
  });
  std::vector<StatRow> rows;
  for (int k = 1; k <= kmax; ++k) {
    const double exact = factorial_moment_isolated_vertices(k, config.model);
    rows.push_back(row_z_band("isolated_vertices_falling_factorial_k" + std::to_string(k), exact,
                              data.accs[static_cast<std::size_t>(k - 1)]));
  }
  return finish(config, std::move(rows), start);
}

ExperimentReport run_size_d_moments(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CompleteSoupSampler sampler(config.model.n, config.model.kappa, config.model.alpha);
  const int kmax = config.k;
  const int d = config.d;
  BatchData data = run_batches(config, [&](int, long long share, rng::Engine& e) {
    BatchData out;
    out.accs.resize(static_cast<std::size_t>(kmax));
    ClusterBuilder builder(config.model.n);
    std::vector<int> buf;
    std::vector<int> sizes;
    for (long long s = 0; s < share; ++s) {
      builder.reset();
      sampler.sample_soup_walks(e, buf,
                                [&](const std::vector<int>& walk) { builder.add_walk(walk); });
      builder.component_sizes(sizes);
      long long count = 0;
      for (int sz : sizes)
        if (sz == d) ++count;
      for (int k = 1; k <= kmax; ++k)
        out.accs[static_cast<std::size_t>(k - 1)].add(
            stats::falling_factorial(static_cast<double>(count), k));
    }
    return out;
  });
  std::vector<StatRow> rows;
  for (int k = 1; k <= kmax; ++k) {
    const double exact = factorial_moment_size_d(d, k, config.model, config.precision_bits);
    rows.push_back(row_z_band("size_" + std::to_string(d) + "_falling_factorial_k" +
                                  std::to_string(k),
                              exact, data.accs[static_cast<std::size_t>(k - 1)]));
  }
  return finish(config, std::move(rows), start);
}

ExperimentReport run_limit_laws(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CompleteSoupSampler sampler(config.model.n, config.model.kappa, config.model.alpha);
  const int kmax = config.k;
  const int d = config.d;
  constexpr int kHistBins = 64;
  BatchData data = run_batches(config, [&](int, long long share, rng::Engine& e) {
    BatchData out;
    out.accs.resize(static_cast<std::size_t>(kmax));
    out.hist.assign(kHistBins, 0);
    ClusterBuilder builder(config.model.n);
    std::vector<int> buf;
    std::vector<int> sizes;
    for (long long s = 0; s < share; ++s) {
      builder.reset();
      sampler.sample_soup_walks(e, buf,
                                [&](const std::vector<int>& walk) { builder.add_walk(walk); });
      builder.component_sizes(sizes);
      long long isolated = 0;
      long long size_d = 0;
      for (int sz : sizes) {
        if (sz == 1) ++isolated;
        if (sz == d) ++size_d;
      }
      const double frac = static_cast<double>(isolated) / config.model.n;
      double power = 1.0;
      for (int k = 1; k <= kmax; ++k) {
        power *= frac;
        out.accs[static_cast<std::size_t>(k - 1)].add(power);
      }
      ++out.hist[static_cast<std::size_t>(std::min<long long>(size_d, kHistBins - 1))];
    }
    return out;
  });
  std::vector<StatRow> rows;
  const LimitLawParams law{config.model.kappa, config.model.alpha, d};
  for (int k = 1; k <= kmax; ++k) {
    const double limit = limit_moment_R(k, law);
    const auto& acc = data.accs[static_cast<std::size_t>(k - 1)];
    rows.push_back(row_relative("isolated_fraction_moment_k" + std::to_string(k), limit,
                                acc.mean(), acc.stderr_of_mean(), 0.02));
  }
  // |I_d| histogram against the Poisson mixture.
  std::vector<double> observed;
  std::vector<double> expected;
  double tail = 1.0;
  for (int k = 0; k < kHistBins - 1; ++k) {
    const double pk = poisson_mixture_pmf(k, law);
    observed.push_back(static_cast<double>(data.hist[static_cast<std::size_t>(k)]));
    expected.push_back(pk * static_cast<double>(config.samples));
    tail -= pk;
    if (tail * static_cast<double>(config.samples) < 0.5 && k >= 3) break;
  }
  observed.push_back(0.0);
  for (std::size_t k = observed.size() - 1; k < static_cast<std::size_t>(kHistBins); ++k)
    observed.back() += static_cast<double>(data.hist[k]);
  expected.push_back(std::max(tail, 0.0) * static_cast<double>(config.samples));
  rows.push_back(row_p_value("size_" + std::to_string(d) + "_distribution_vs_poisson_mixture",
                             stats::chi_square(observed, expected)));
  return finish(config, std::move(rows), start);
}

ExperimentReport run_large_clusters(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CompleteSoupSampler sampler(config.model.n, config.model.kappa, config.model.alpha);
  const double threshold = std::pow(static_cast<double>(config.model.n), 1.0 - config.epsilon);
  BatchData data = run_batches(config, [&](int, long long share, rng::Engine& e) {
    BatchData out;
    out.accs.resize(1);
    ClusterBuilder builder(config.model.n);
    std::vector<int> buf;
    for (long long s = 0; s < share; ++s) {
      builder.reset();
      sampler.sample_soup_walks(e, buf,
                                [&](const std::vector<int>& walk) { builder.add_walk(walk); });
      out.accs[0].add(builder.max_cluster_size() >= threshold ? 1.0 : 0.0);
    }
    return out;
  });
  std::vector<StatRow> rows;
  const LoopMass mass = loop_mass(config.model.n, config.model.kappa);
  const double log_ratio = std::log(static_cast<double>(config.model.n) / config.model.kappa);
  rows.push_back(row_relative("loop_mass_exact_vs_log_n_over_kappa", log_ratio, mass.exact,
                              0.0, 0.05));
  StatRow frac;
  frac.name = "fraction_with_cluster_ge_n_pow_1_minus_eps";
  frac.exact = 0.95;
  frac.estimate = data.accs[0].mean();
  frac.stderr_of_mean = data.accs[0].stderr_of_mean();
  frac.z = frac.stderr_of_mean > 0.0 ? (frac.estimate - 0.95) / frac.stderr_of_mean : 0.0;
  frac.ok = frac.estimate >= 0.95;
  frac.band = ">= 0.95";
  rows.push_back(frac);
  return finish(config, std::move(rows), start);
}

ExperimentReport run_loop_length_law(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CompleteSoupSampler sampler(config.model.n, config.model.kappa, config.model.alpha);
  const double log_n = std::log(static_cast<double>(config.model.n));
  BatchData data = run_batches(config, [&](int, long long share, rng::Engine& e) {
    BatchData out;
    out.raw.reserve(static_cast<std::size_t>(share));
    std::vector<int> buf;
    for (long long s = 0; s < share; ++s) {
      sampler.sample_walk(e, buf);
      out.raw.push_back(std::log(static_cast<double>(buf.size())) / log_n);
    }
    return out;
  });
  std::vector<StatRow> rows;
  const double statistic = stats::ks_uniform(data.raw);
  const double critical =
      stats::ks_critical_value(static_cast<std::size_t>(config.samples), kPValueFloor);
  StatRow r;
  r.name = "ks_log_length_over_log_n_vs_uniform";
  r.exact = critical;
  r.estimate = statistic;
  r.ok = statistic < critical;
  r.band = "< KS critical value at 0.001";
  rows.push_back(r);
  return finish(config, std::move(rows), start);
}

ExperimentReport run_size_gf(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CompleteSoupSampler sampler(config.model.n, config.model.kappa, config.model.alpha);
  const auto& thetas = config.thetas;
  BatchData data = run_batches(config, [&](int, long long share, rng::Engine& e) {
    BatchData out;
    out.accs.resize(thetas.size());
    std::vector<int> buf;
    for (long long s = 0; s < share; ++s) {
      long long total = 0;
      sampler.sample_soup_walks(e, buf, [&](const std::vector<int>& walk) {
        total += static_cast<long long>(walk.size());
      });
      for (std::size_t t = 0; t < thetas.size(); ++t)
        out.accs[t].add(std::pow(thetas[t], static_cast<double>(total)));
    }
    return out;
  });
  std::vector<StatRow> rows;
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    std::ostringstream name;
    name << "mean_theta_pow_M[theta=" << thetas[t] << "]";
    rows.push_back(row_z_band(name.str(), size_gf(thetas[t], config.model), data.accs[t]));
  }
  return finish(config, std::move(rows), start);
}

ExperimentReport run_er_baseline(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ErParams params{config.model.n, config.er_c};
  params.check();
  const int dmax = config.d;
  const int kmax = config.k;
  // accs layout: for each d in [1, dmax]: kmax falling-factorial slots for the
  // tree census, then one slot for the cluster census mean.
  const auto slot = [&](int d, int k) {
    return static_cast<std::size_t>((d - 1) * (kmax + 1) + (k - 1));
  };
  const auto cluster_slot = [&](int d) {
    return static_cast<std::size_t>((d - 1) * (kmax + 1) + kmax);
  };
  BatchData data = run_batches(config, [&](int, long long share, rng::Engine& e) {
    BatchData out;
    out.accs.resize(static_cast<std::size_t>(dmax) * (kmax + 1));
    for (long long s = 0; s < share; ++s) {
      const EdgeList edges = sample_gnp(e, params);
      const ComponentScan scan(params.n, edges);
      for (int d = 1; d <= dmax; ++d) {
        const double trees = static_cast<double>(scan.tree_count(d));
        for (int k = 1; k <= kmax; ++k)
          out.accs[slot(d, k)].add(stats::falling_factorial(trees, k));
        out.accs[cluster_slot(d)].add(static_cast<double>(scan.cluster_count(d)));
      }
    }
    return out;
  });
  std::vector<StatRow> rows;
  for (int d = 1; d <= dmax; ++d) {
    for (int k = 1; k <= kmax; ++k) {
      const double exact = er_tree_factorial_moment(params.n, params.c, d, k);
      StatRow row = row_z_band("er_tree_falling_factorial_d" + std::to_string(d) + "_k" +
                                   std::to_string(k),
                               exact, data.accs[slot(d, k)]);
      row.extra = {{"n", params.n}, {"c", params.c}, {"d", d}, {"k", k}};
      rows.push_back(std::move(row));
    }
    if (params.n >= 1000) {
      // Asymptotic density check, meaningful only at large n.
      const auto& acc = data.accs[cluster_slot(d)];
      StatRow row = row_relative("er_cluster_density_d" + std::to_string(d),
                                 er_cluster_density_limit(params.c, d),
                                 acc.mean() / static_cast<double>(params.n),
                                 acc.stderr_of_mean() / static_cast<double>(params.n), 0.05);
      row.extra = {{"n", params.n}, {"c", params.c}, {"d", d}, {"k", 1}};
      rows.push_back(std::move(row));
    }
  }
  return finish(config, std::move(rows), start);
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kFinerProb: return "finer-prob";
    case ExperimentKind::kExactProb: return "exact-prob";
    case ExperimentKind::kIsolatedMoments: return "isolated-moments";
    case ExperimentKind::kSizeDMoments: return "size-d-moments";
    case ExperimentKind::kLimitLaws: return "limit-laws";
    case ExperimentKind::kLargeClusters: return "large-clusters";
    case ExperimentKind::kLoopLengthLaw: return "loop-length-law";
    case ExperimentKind::kSizeGf: return "size-gf";
    case ExperimentKind::kErBaseline: return "er-baseline";
  }
  throw std::logic_error("unknown ExperimentKind");
}

ExperimentKind kind_from_string(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::kFinerProb, ExperimentKind::kExactProb, ExperimentKind::kIsolatedMoments,
        ExperimentKind::kSizeDMoments, ExperimentKind::kLimitLaws, ExperimentKind::kLargeClusters,
        ExperimentKind::kLoopLengthLaw, ExperimentKind::kSizeGf, ExperimentKind::kErBaseline}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown experiment kind: " + name);
}

void ExperimentConfig::check() const {
  model.check();
  if (samples < 1) throw std::invalid_argument("ExperimentConfig: samples must be >= 1");
  if (batches < 1 || static_cast<long long>(batches) > samples)
    throw std::invalid_argument("ExperimentConfig: need 1 <= batches <= samples");
  if (d < 1 || k < 1) throw std::invalid_argument("ExperimentConfig: d and k must be >= 1");
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw std::invalid_argument("ExperimentConfig: epsilon must lie in (0,1)");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["kind"] = loopsoup::to_string(kind);
  j["n"] = model.n;
  j["kappa"] = model.kappa;
  j["alpha"] = model.alpha;
  j["samples"] = samples;
  j["seed"] = seed;
  j["batches"] = batches;
  j["precision_bits"] = precision_bits;
  j["d"] = d;
  j["k"] = k;
  j["epsilon"] = epsilon;
  j["c"] = er_c;
  j["thetas"] = thetas;
  if (partition) j["partition"] = partition->to_json();
  if (!out.empty()) j["out"] = out;
  j["format"] = format == Format::kJson ? "json" : "csv";
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("kind")) c.kind = kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("n")) c.model.n = j.at("n").get<int>();
  if (j.contains("kappa")) c.model.kappa = j.at("kappa").get<double>();
  if (j.contains("alpha")) c.model.alpha = j.at("alpha").get<double>();
  if (j.contains("samples")) c.samples = j.at("samples").get<long long>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("batches")) c.batches = j.at("batches").get<int>();
  if (j.contains("precision_bits")) c.precision_bits = j.at("precision_bits").get<int>();
  if (j.contains("d")) c.d = j.at("d").get<int>();
  if (j.contains("k")) c.k = j.at("k").get<int>();
  if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
  if (j.contains("c")) c.er_c = j.at("c").get<double>();
  if (j.contains("thetas")) c.thetas = j.at("thetas").get<std::vector<double>>();
  if (j.contains("partition"))
    c.partition = Partition::from_json(j.at("partition"), c.model.n);
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  if (j.contains("format"))
    c.format = j.at("format").get<std::string>() == "csv" ? Format::kCsv : Format::kJson;
  return c;
}

bool ExperimentReport::all_ok() const {
  for (const auto& r : rows)
    if (!r.ok) return false;
  return true;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["metadata"] = {{"seed", seed},
                   {"samples", samples},
                   {"wall_time_s", wall_seconds},
                   {"precision_bits", precision_bits},
                   {"config", config_echo}};
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["name"] = r.name;
    if (r.exact) row["exact"] = *r.exact;
    row["estimate"] = r.estimate;
    row["stderr"] = r.stderr_of_mean;
    row["z"] = r.z;
    row["ok"] = r.ok;
    row["band"] = r.band;
    if (r.extra.is_object())
      for (const auto& [key, value] : r.extra.items()) row[key] = value;
    arr.push_back(std::move(row));
  }
  j["rows"] = std::move(arr);
  j["all_ok"] = all_ok();
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "name,exact,estimate,stderr,z,ok\n";
  for (const auto& r : rows) {
    os << r.name << ',';
    if (r.exact) os << *r.exact;
    os << ',' << r.estimate << ',' << r.stderr_of_mean << ',' << r.z << ','
       << (r.ok ? "true" : "false") << '\n';
  }
  return os.str();
}

int max_worker_threads() {
  if (const char* env = std::getenv("LOOPSOUP_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ExperimentReport run(const ExperimentConfig& config) {
  config.check();
  switch (config.kind) {
    case ExperimentKind::kFinerProb: return run_finer_prob(config);
    case ExperimentKind::kExactProb: return run_exact_prob(config);
    case ExperimentKind::kIsolatedMoments: return run_isolated_moments(config);
    case ExperimentKind::kSizeDMoments: return run_size_d_moments(config);
    case ExperimentKind::kLimitLaws: return run_limit_laws(config);
    case ExperimentKind::kLargeClusters: return run_large_clusters(config);
    case ExperimentKind::kLoopLengthLaw: return run_loop_length_law(config);
    case ExperimentKind::kSizeGf: return run_size_gf(config);
    case ExperimentKind::kErBaseline: return run_er_baseline(config);
  }
  throw std::logic_error("unknown ExperimentKind");
}

nlohmann::json exact_value_table(const ModelParams& params, int max_order, int d, int k,
                                 double theta, int precision_bits) {
  params.check();
  nlohmann::json j;
  const int bits = std::max(precision_bits, MomentTable::required_bits(max_order, params));
  MomentTable table(params, max_order, bits);
  auto moments = nlohmann::json::array();
  auto cumulants = nlohmann::json::array();
  for (int i = 0; i <= max_order; ++i) moments.push_back(table.moment(i).str());
  for (int i = 1; i <= max_order; ++i) cumulants.push_back(table.cumulant(i).str());
  j["moments"] = std::move(moments);
  j["cumulants"] = std::move(cumulants);
  j["precision_bits"] = bits;
  if (params.n <= 64) j["prob_connected"] = prob_connected(params, precision_bits);
  const LoopMass mass = loop_mass(params.n, params.kappa);
  j["loop_mass_exact"] = mass.exact;
  j["loop_mass_paper_display"] = mass.paper_display;
  j["size_gf"] = {{"theta", theta}, {"value", size_gf(theta, params)}};
  const LimitLawParams law{params.kappa, params.alpha, d};
  j["limit_moment_R"] = limit_moment_R(k, law);
  j["limit_moment_H"] = limit_moment_H(k, law);
  j["poisson_mixture_pmf"] = poisson_mixture_pmf(k, law);
  j["factorial_moment_isolated_vertices"] = factorial_moment_isolated_vertices(k, params);
  if (static_cast<long long>(k) * d <= params.n)
    j["factorial_moment_size_d"] = factorial_moment_size_d(d, k, params, precision_bits);
  if (d >= 2 && d <= params.n) {
    j["dgon_measure"] = dgon_measure(d, params.n, params.kappa);
    j["cumulant_asymptotic_ratio"] = cumulant_asymptotic_ratio(d, params, precision_bits);
  }
  return j;
}

}  // namespace loopsoup
