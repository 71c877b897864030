// loopsoup_cli.cpp — command-line entry point.
//
// Subcommands:
//   exact      print closed-form engine values for given parameters
//   sample     emit loop configurations as JSON lines
//   verify     run a verification experiment; exit 0 iff all bands hold
//   er         shorthand for `verify er-baseline`
//   asymptotics  cumulant-ratio and loop-mass tables over a grid of n
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "loopsoup/cluster.hpp"
#include "loopsoup/er.hpp"
#include "loopsoup/exact.hpp"
#include "loopsoup/experiment.hpp"
#include "loopsoup/sampler.hpp"

namespace {

using loopsoup::ExperimentConfig;

struct CommonFlags {
  std::string config_path;
  std::string partition_json;
};

void add_config_flags(CLI::App* cmd, ExperimentConfig& cfg, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file; flags override its keys");
  cmd->add_option("--n", cfg.model.n, "vertex count");
  cmd->add_option("--kappa", cfg.model.kappa, "killing rate");
  cmd->add_option("--alpha", cfg.model.alpha, "soup intensity multiplier");
  cmd->add_option("--d", cfg.d, "cluster size");
  cmd->add_option("--k", cfg.k, "highest factorial-moment order");
  cmd->add_option("--samples", cfg.samples, "Monte Carlo sample count");
  cmd->add_option("--seed", cfg.seed, "64-bit RNG seed");
  cmd->add_option("--batches", cfg.batches, "batch count (one RNG stream each)");
  cmd->add_option("--precision-bits", cfg.precision_bits, "mantissa bits for exact values");
  cmd->add_option("--epsilon", cfg.epsilon, "large-cluster exponent");
  cmd->add_option("--c", cfg.er_c, "Erdos-Renyi edge-rate constant");
  cmd->add_option("--theta", cfg.thetas, "size-gf evaluation points");
  cmd->add_option("--partition", flags.partition_json, "target partition, e.g. [[0,1],[2]]");
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
  cmd->add_option("--format", [&cfg](const CLI::results_t& res) {
    if (res[0] == "csv") cfg.format = ExperimentConfig::Format::kCsv;
    else if (res[0] == "json") cfg.format = ExperimentConfig::Format::kJson;
    else return false;
    return true;
  }, "csv or json");
}

// Config file first, then flag overrides on top.
ExperimentConfig resolve_config(const CLI::App* cmd, const ExperimentConfig& flag_values,
                                const CommonFlags& flags) {
  ExperimentConfig cfg = flag_values;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + flags.config_path);
    nlohmann::json j;
    in >> j;
    cfg = ExperimentConfig::from_json(j);
    if (cmd->count("--n")) cfg.model.n = flag_values.model.n;
    if (cmd->count("--kappa")) cfg.model.kappa = flag_values.model.kappa;
    if (cmd->count("--alpha")) cfg.model.alpha = flag_values.model.alpha;
    if (cmd->count("--d")) cfg.d = flag_values.d;
    if (cmd->count("--k")) cfg.k = flag_values.k;
    if (cmd->count("--samples")) cfg.samples = flag_values.samples;
    if (cmd->count("--seed")) cfg.seed = flag_values.seed;
    if (cmd->count("--batches")) cfg.batches = flag_values.batches;
    if (cmd->count("--precision-bits")) cfg.precision_bits = flag_values.precision_bits;
    if (cmd->count("--epsilon")) cfg.epsilon = flag_values.epsilon;
    if (cmd->count("--c")) cfg.er_c = flag_values.er_c;
    if (cmd->count("--theta")) cfg.thetas = flag_values.thetas;
    if (cmd->count("--out")) cfg.out = flag_values.out;
    if (cmd->count("--format")) cfg.format = flag_values.format;
  }
  if (!flags.partition_json.empty())
    cfg.partition =
        loopsoup::Partition::from_json(nlohmann::json::parse(flags.partition_json), cfg.model.n);
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << std::endl;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text << '\n';
}

int cmd_exact(const ExperimentConfig& cfg, double theta, int max_order) {
  nlohmann::json j = loopsoup::exact_value_table(cfg.model, max_order, cfg.d, cfg.k, theta,
                                                 cfg.precision_bits);
  if (cfg.partition) {
    j["prob_finer"] = loopsoup::prob_finer(*cfg.partition, cfg.model);
    j["prob_exact"] = loopsoup::prob_exact(*cfg.partition, cfg.model);
  }
  emit(j.dump(2), cfg.out);
  return 0;
}

int cmd_sample(const ExperimentConfig& cfg, bool general) {
  std::ostringstream os;
  loopsoup::rng::Engine engine = loopsoup::rng::make_stream(cfg.seed, 0);
  if (general) {
    const auto g = loopsoup::GraphSpec::complete({cfg.model.n, cfg.model.kappa});
    loopsoup::GeneralSoupSampler sampler(g, cfg.model.alpha);
    for (long long i = 0; i < cfg.samples; ++i)
      os << sampler.sample_soup(engine).to_json().dump() << '\n';
  } else {
    loopsoup::CompleteSoupSampler sampler(cfg.model.n, cfg.model.kappa, cfg.model.alpha);
    for (long long i = 0; i < cfg.samples; ++i)
      os << sampler.sample_soup(engine).to_json().dump() << '\n';
  }
  std::string text = os.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  emit(text, cfg.out);
  return 0;
}

int cmd_verify(const ExperimentConfig& cfg) {
  const loopsoup::ExperimentReport report = loopsoup::run(cfg);
  emit(cfg.format == ExperimentConfig::Format::kCsv ? report.to_csv()
                                                    : report.to_json().dump(2),
       cfg.out);
  return report.all_ok() ? 0 : 1;
}

int cmd_asymptotics(const ExperimentConfig& cfg) {
  nlohmann::json rows = nlohmann::json::array();
  for (int n : {100, 1000, 10000, 100000}) {
    nlohmann::json row;
    row["n"] = n;
    const loopsoup::LoopMass mass = loopsoup::loop_mass(n, cfg.model.kappa);
    row["loop_mass_exact"] = mass.exact;
    row["loop_mass_paper_display"] = mass.paper_display;
    row["log_n_over_kappa"] = std::log(n / cfg.model.kappa);
    loopsoup::ModelParams params{n, cfg.model.kappa, cfg.model.alpha};
    for (int d = 2; d <= std::max(2, cfg.d); ++d)
      row["cumulant_ratio_d" + std::to_string(d)] =
          loopsoup::cumulant_asymptotic_ratio(d, params, cfg.precision_bits);
    rows.push_back(std::move(row));
  }
  emit(rows.dump(2), cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loop-soup cluster simulator and exact-formula engine"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  CommonFlags flags;
  double theta = 0.5;
  int max_order = 8;
  bool general = false;
  std::string kind_name;

  auto* exact = app.add_subcommand("exact", "print closed-form values");
  add_config_flags(exact, cfg, flags);
  exact->add_option("--theta-point", theta, "size-gf evaluation point");
  exact->add_option("--max-order", max_order, "highest moment/cumulant order");

  auto* sample = app.add_subcommand("sample", "emit LoopConfig JSON lines");
  add_config_flags(sample, cfg, flags);
  sample->add_flag("--general", general, "use the general-graph sampler on K_n");

  auto* verify = app.add_subcommand("verify", "run a verification experiment");
  add_config_flags(verify, cfg, flags);
  verify
      ->add_option("kind", kind_name,
                   "finer-prob | exact-prob | isolated-moments | size-d-moments | limit-laws | "
                   "large-clusters | loop-length-law | size-gf | er-baseline")
      ->required();

  auto* er = app.add_subcommand("er", "Erdos-Renyi baseline (verify er-baseline)");
  add_config_flags(er, cfg, flags);

  auto* asym = app.add_subcommand("asymptotics", "cumulant-ratio and loop-mass tables");
  add_config_flags(asym, cfg, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (exact->parsed()) return cmd_exact(resolve_config(exact, cfg, flags), theta, max_order);
    if (sample->parsed()) return cmd_sample(resolve_config(sample, cfg, flags), general);
    if (verify->parsed()) {
      ExperimentConfig resolved = resolve_config(verify, cfg, flags);
      resolved.kind = loopsoup::kind_from_string(kind_name);
      return cmd_verify(resolved);
    }
    if (er->parsed()) {
      ExperimentConfig resolved = resolve_config(er, cfg, flags);
      resolved.kind = loopsoup::ExperimentKind::kErBaseline;
      return cmd_verify(resolved);
    }
    if (asym->parsed()) return cmd_asymptotics(resolve_config(asym, cfg, flags));
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << std::endl;
    return 2;
  }
  return 2;
}
