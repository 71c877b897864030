// experiment.hpp — configuration, batched Monte Carlo orchestration, and
// report emission for the verification experiments.
//
// Batches run concurrently on split RNG streams (stream index = batch index)
// and are merged in batch order, so a report depends only on (config, seed),
// not on the worker count. LOOPSOUP_THREADS caps the workers.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopsoup/exact.hpp"
#include "loopsoup/partition.hpp"

namespace loopsoup {

enum class ExperimentKind {
  kFinerProb,
  kExactProb,
  kIsolatedMoments,
  kSizeDMoments,
  kLimitLaws,
  kLargeClusters,
  kLoopLengthLaw,
  kSizeGf,
  kErBaseline,
};

std::string to_string(ExperimentKind kind);
ExperimentKind kind_from_string(const std::string& name);

struct ExperimentConfig {
  ModelParams model{4, 1.0, 1.0};
  ExperimentKind kind = ExperimentKind::kFinerProb;
  long long samples = 100000;
  std::uint64_t seed = 20240801;
  int batches = 16;
  int precision_bits = 192;
  int d = 2;                             // cluster size for size-d / limit-law kinds
  int k = 2;                             // highest factorial-moment order
  double epsilon = 0.5;                  // large-cluster exponent
  double er_c = 1.0;                     // G(n, c/n) rate
  std::vector<double> thetas{0.0, 0.5, 0.9};
  std::optional<Partition> partition;    // finer-prob / exact-prob target
  std::string out;                       // output path; empty = stdout
  enum class Format { kJson, kCsv } format = Format::kJson;

  void check() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct StatRow {
  std::string name;
  std::optional<double> exact;
  double estimate = 0.0;
  double stderr_of_mean = 0.0;
  double z = 0.0;
  bool ok = true;
  std::string band;              // which acceptance band produced ok
  nlohmann::json extra;          // kind-specific row fields (e.g. {n, c, d, k})
};

struct ExperimentReport {
  nlohmann::json config_echo;
  std::vector<StatRow> rows;
  double wall_seconds = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
  int precision_bits = 0;

  bool all_ok() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

ExperimentReport run(const ExperimentConfig& config);

// Worker cap from LOOPSOUP_THREADS (falls back to hardware concurrency).
int max_worker_threads();

// Closed-form value table for the `exact` CLI subcommand; multiprecision
// values are rendered as decimal strings at the working precision.
nlohmann::json exact_value_table(const ModelParams& params, int max_order, int d, int k,
                                 double theta, int precision_bits);

}  // namespace loopsoup
