#include "cli/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "cli/manifest.hpp"
#include "jury/accuracy.hpp"
#include "jury/error.hpp"
#include "jury/experiments.hpp"
#include "jury/weighting.hpp"

#ifndef JURYSIM_VERSION
#define JURYSIM_VERSION "0.0.0"
#endif

namespace jury::cli {
namespace {

const std::vector<std::string> kSweepKeys = {"experts", "dist", "m", "grid", "iters", "seed", "mode", "mirror"};
const std::vector<std::string> kPartitionKeys = {"n", "dist", "k", "iters", "seed", "mode", "unpaired", "mirror"};

// Remembers which command-line options map onto which settings keys so the
// flags can be layered over a config file or manifest.
class FlagLayer {
 public:
  void option(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    auto& store = storage_.emplace_back();
    bindings_.push_back({app->add_option(name, store, help), key, &store, false});
  }
  void flag(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    bindings_.push_back({app->add_flag(name, help), key, nullptr, true});
  }
  Settings collect() const {
    Settings s;
    for (const auto& b : bindings_) {
      if (b.opt->count() == 0) continue;
      s.set(b.key, b.is_flag ? "true" : *b.store, b.opt->get_name());
    }
    return s;
  }

 private:
  struct Binding {
    CLI::Option* opt;
    std::string key;
    std::string* store;
    bool is_flag;
  };
  std::deque<std::string> storage_;
  std::vector<Binding> bindings_;
};

struct RunOptions {
  std::string config_path;
  std::string manifest_path;
  std::string out_path;
  int threads = 0;
};

void apply_threads(int threads) {
  if (threads < 0) throw ConfigError("--threads must be positive");
  if (threads > 0) omp_set_num_threads(threads);
}

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::uint64_t resolve_seed(Settings& s) {
  if (const auto* set = s.find("seed")) return parse_uint(*set, "seed");
  std::uint64_t seed = 0;
  std::string origin = "default";
  if (const char* env = std::getenv("JURYSIM_SEED"); env && *env) {
    seed = parse_uint(Setting{env, "JURYSIM_SEED"}, "seed");
    origin = "JURYSIM_SEED";
  }
  s.set("seed", std::to_string(seed), origin);
  return seed;
}

void default_if_missing(Settings& s, const std::string& key, const std::string& value) {
  if (!s.has(key)) s.set(key, value, "default");
}

rng::DistributionSpec resolve_distribution(const Settings& s) {
  rng::DistributionSpec spec = parse_distribution(*s.find("dist"), "dist");
  if (const auto* mirror = s.find("mirror"); mirror && parse_bool(*mirror, "mirror")) {
    auto* texp = std::get_if<rng::TruncExp>(&spec);
    if (!texp) throw ConfigError(mirror->origin + ": mirror: only applies to truncexp");
    texp->mirrored = true;
  }
  return spec;
}

// Layers manifest < config file < flags.
Settings layered_settings(const std::string& command, const RunOptions& run, const Settings& flags,
                          const std::vector<std::string>& keys, RunManifest* manifest_out) {
  Settings s;
  if (!run.manifest_path.empty()) {
    RunManifest m = load_manifest(run.manifest_path);
    if (m.command != command) {
      throw ConfigError(run.manifest_path + ": manifest is for '" + m.command + "', not '" + command + "'");
    }
    for (const auto& [key, setting] : m.config.all()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError(run.manifest_path + ": unknown key '" + key + "'");
      }
    }
    s.merge(m.config);
    if (manifest_out) *manifest_out = std::move(m);
  }
  if (!run.config_path.empty()) {
    std::ifstream in(run.config_path);
    if (!in) throw ConfigError("cannot open config file " + run.config_path);
    s.merge(parse_flat_config(in, run.config_path, keys));
  }
  s.merge(flags);
  return s;
}

SweepConfig build_sweep(Settings& s) {
  default_if_missing(s, "grid", "0:1:0.01");
  default_if_missing(s, "mode", "signed");
  std::vector<double> grid = parse_grid(*s.find("grid"), "grid");
  const WeightingMode mode = parse_mode(*s.find("mode"), "mode");

  const bool fixed = s.has("experts");
  if (fixed == s.has("dist")) throw ConfigError("sweep: give exactly one of --experts or --dist");
  if (fixed) {
    for (const char* key : {"m", "iters", "mirror"}) {
      if (s.has(key)) throw ConfigError(s.find(key)->origin + ": " + key + ": not used with fixed experts");
    }
    CompetenceVector experts(parse_double_list(*s.find("experts"), "experts"));
    const std::uint64_t seed = resolve_seed(s);
    return SweepConfig{std::move(experts), std::move(grid), 0, seed, mode};
  }
  default_if_missing(s, "m", "5");
  default_if_missing(s, "iters", "100000");
  DrawnExperts drawn{static_cast<std::size_t>(parse_uint(*s.find("m"), "m")), resolve_distribution(s)};
  const std::uint64_t iterations = parse_uint(*s.find("iters"), "iters");
  const std::uint64_t seed = resolve_seed(s);
  return SweepConfig{std::move(drawn), std::move(grid), iterations, seed, mode};
}

PartitionConfig build_partition(Settings& s) {
  PartitionConfig cfg;
  if (!s.has("n")) throw ConfigError("partition: --n is required");
  if (!s.has("dist")) throw ConfigError("partition: --dist is required");
  default_if_missing(s, "iters", "100000");
  default_if_missing(s, "mode", "signed");
  default_if_missing(s, "unpaired", "false");
  cfg.total_agents = static_cast<std::size_t>(parse_uint(*s.find("n"), "n"));
  if (cfg.total_agents == 0) throw ConfigError(s.find("n")->origin + ": n: must be at least 1");
  if (!s.has("k")) {
    std::string ks;
    for (std::size_t k : default_judge_counts(cfg.total_agents)) ks += (ks.empty() ? "" : ",") + std::to_string(k);
    s.set("k", ks, "default");
  }
  cfg.judge_counts = parse_count_list(*s.find("k"), "k");
  for (std::size_t k : cfg.judge_counts) {
    if (k >= cfg.total_agents) {
      throw ConfigError(s.find("k")->origin + ": k: judge count " + std::to_string(k) +
                        " leaves no expert; at least one expert required");
    }
  }
  cfg.distribution = resolve_distribution(s);
  cfg.iterations = parse_uint(*s.find("iters"), "iters");
  cfg.mode = parse_mode(*s.find("mode"), "mode");
  cfg.paired = !parse_bool(*s.find("unpaired"), "unpaired");
  cfg.seed = resolve_seed(s);
  return cfg;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

// Writes the CSV (to --out or stdout) and, for files, the manifest beside it.
void emit(const std::string& command, const RunOptions& run, const Settings& settings, std::uint64_t seed,
          const std::string& started, const ResultTable& table, const RunManifest* previous,
          std::ostream& out, std::ostream& err) {
  const std::string csv = to_csv(table);
  std::string path = run.out_path;
  if (path.empty() && previous && !previous->outputs.empty()) path = previous->outputs.front();
  if (path.empty()) {
    out << csv;
    return;
  }
  write_text_file(path, csv);

  RunManifest m;
  m.command = command;
  m.config = settings;
  m.seed = seed;
  m.version = JURYSIM_VERSION;
  m.started_at = started;
  m.finished_at = utc_timestamp();
  m.outputs = {path};
  m.output_digest = fnv1a_hex(csv);
  write_text_file(manifest_path_for(path), to_json(m));

  if (previous && !previous->output_digest.empty() && previous->output_digest != m.output_digest) {
    err << "warning: output digest " << m.output_digest << " differs from manifest digest "
        << previous->output_digest << "\n";
  }
}

void add_run_options(CLI::App* app, RunOptions& run) {
  app->add_option("--config", run.config_path, "Flat key = value config file");
  app->add_option("--manifest", run.manifest_path, "Re-run the settings recorded in a manifest");
  app->add_option("--out", run.out_path, "CSV output path (manifest written to <out>.manifest.json)");
  app->add_option("--threads", run.threads, "Worker threads (default: all cores)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted majority jury simulator", "jurysim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", JURYSIM_VERSION);

  // accuracy
  auto* acc = app.add_subcommand("accuracy", "Accuracy of one weighted majority rule");
  std::string experts_text, weights_text, judges_text, mode_text = "signed";
  double judge = 0.0;
  bool use_log_odds = false, use_equal = false;
  std::uint64_t mc_iters = 0;
  std::uint64_t acc_seed = 0;
  int acc_threads = 0;
  acc->add_option("--experts", experts_text, "Expert competences, comma separated")->required();
  auto* weights_opt = acc->add_option("--weights", weights_text, "Explicit weights, comma separated");
  acc->add_flag("--log-odds", use_log_odds, "Optimal log-odds weights");
  acc->add_flag("--equal", use_equal, "Simple majority");
  auto* judge_opt = acc->add_option("--judge", judge, "Single judge competence in [0,1]");
  auto* judges_opt = acc->add_option("--judges", judges_text, "Judge panel competences, comma separated");
  acc->add_option("--mode", mode_text, "signed or clamped");
  auto* mc_opt = acc->add_option("--mc", mc_iters, "Monte-Carlo iterations instead of exact enumeration");
  auto* acc_seed_opt = acc->add_option("--seed", acc_seed, "Monte-Carlo seed (default $JURYSIM_SEED or 0)");
  acc->add_option("--threads", acc_threads, "Worker threads");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Single-judge accuracy across judge competences");
  RunOptions sweep_run;
  FlagLayer sweep_flags;
  add_run_options(sweep, sweep_run);
  sweep_flags.option(sweep, "--experts", "experts", "Fixed expert competences");
  sweep_flags.option(sweep, "--dist", "dist", "Expert distribution, e.g. uniform:0.001:0.999");
  sweep_flags.option(sweep, "--m", "m", "Experts per draw (default 5)");
  sweep_flags.option(sweep, "--grid", "grid", "Judge grid lo:hi:step (default 0:1:0.01)");
  sweep_flags.option(sweep, "--iters", "iters", "Draws per grid point (default 100000)");
  sweep_flags.option(sweep, "--seed", "seed", "Master seed");
  sweep_flags.option(sweep, "--mode", "mode", "signed or clamped");
  sweep_flags.flag(sweep, "--mirror", "mirror", "Mirror the truncated exponential toward hi");

  // partition
  auto* part = app.add_subcommand("partition", "Split N agents into k judges and N-k experts");
  RunOptions part_run;
  FlagLayer part_flags;
  add_run_options(part, part_run);
  part_flags.option(part, "--n", "n", "Total agents");
  part_flags.option(part, "--dist", "dist", "Agent competence distribution");
  part_flags.option(part, "--k", "k", "Judge counts, comma separated (default 0..N/2+1)");
  part_flags.option(part, "--iters", "iters", "Iterations (default 100000)");
  part_flags.option(part, "--seed", "seed", "Master seed");
  part_flags.option(part, "--mode", "mode", "signed or clamped");
  part_flags.flag(part, "--unpaired", "unpaired", "Fresh agent draws for every judge count");
  part_flags.flag(part, "--mirror", "mirror", "Mirror the truncated exponential toward hi");

  // threshold
  auto* thr = app.add_subcommand("threshold", "Smallest judge competence that reproduces the optimal rule");
  std::string thr_experts;
  double thr_step = 0.001;
  thr->add_option("--experts", thr_experts, "Expert competences, comma separated")->required();
  thr->add_option("--step", thr_step, "Coarse grid step before bisection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (acc->parsed()) {
      apply_threads(acc_threads);
      const Setting experts_setting{experts_text, "--experts"};
      const CompetenceVector experts(parse_double_list(experts_setting, "experts"));
      const WeightingMode mode = parse_mode(Setting{mode_text, "--mode"}, "mode");
      const int chosen = static_cast<int>(weights_opt->count() > 0) + static_cast<int>(use_log_odds) +
                         static_cast<int>(use_equal) + static_cast<int>(judge_opt->count() > 0) +
                         static_cast<int>(judges_opt->count() > 0);
      if (chosen != 1) {
        throw ConfigError("accuracy: give exactly one of --weights, --log-odds, --equal, --judge, --judges");
      }
      WeightVector weights;
      if (weights_opt->count()) {
        weights = WeightVector(parse_double_list(Setting{weights_text, "--weights"}, "weights"));
        if (weights.size() != experts.size()) throw ContractError("--weights and --experts differ in length");
      } else if (use_log_odds) {
        weights = optimal_weights(experts);
      } else if (use_equal) {
        weights = WeightVector(std::vector<double>(experts.size(), 1.0));
      } else if (judge_opt->count()) {
        weights = judge_weights(judge, experts, mode);
      } else {
        const CompetenceVector judges(parse_double_list(Setting{judges_text, "--judges"}, "judges"), Bounds::closed);
        weights = panel_weights_from_competences(judges, experts, mode);
      }
      if (mc_opt->count()) {
        Settings seed_settings;
        if (acc_seed_opt->count()) seed_settings.set("seed", std::to_string(acc_seed), "--seed");
        const std::uint64_t seed = resolve_seed(seed_settings);
        if (mc_iters == 0) throw ConfigError("--mc: need at least one iteration");
        const AccuracyEstimate est = mc_accuracy(experts, weights, mc_iters, seed);
        out << format_fixed(est.mean) << ' ' << format_fixed(est.std_error) << ' ' << est.iterations << '\n';
      } else {
        out << format_fixed(exact_accuracy(experts, weights).mean) << '\n';
      }
      return kExitOk;
    }

    if (sweep->parsed()) {
      const std::string started = utc_timestamp();
      apply_threads(sweep_run.threads);
      RunManifest previous;
      Settings s = layered_settings("sweep", sweep_run, sweep_flags.collect(), kSweepKeys,
                                    sweep_run.manifest_path.empty() ? nullptr : &previous);
      const SweepConfig cfg = build_sweep(s);
      const ResultTable table = distribution_sweep(cfg);
      emit("sweep", sweep_run, s, cfg.seed, started, table,
           sweep_run.manifest_path.empty() ? nullptr : &previous, out, err);
      return kExitOk;
    }

    if (part->parsed()) {
      const std::string started = utc_timestamp();
      apply_threads(part_run.threads);
      RunManifest previous;
      Settings s = layered_settings("partition", part_run, part_flags.collect(), kPartitionKeys,
                                    part_run.manifest_path.empty() ? nullptr : &previous);
      const PartitionConfig cfg = build_partition(s);
      const ResultTable table = partition_experiment(cfg);
      emit("partition", part_run, s, cfg.seed, started, table,
           part_run.manifest_path.empty() ? nullptr : &previous, out, err);
      return kExitOk;
    }

    if (thr->parsed()) {
      const CompetenceVector experts(parse_double_list(Setting{thr_experts, "--experts"}, "experts"));
      const ThresholdResult r = find_optimality_threshold(experts, thr_step);
      if (r.non_monotone) {
        err << "warning: optimal rule is not reproduced at every grid point above the threshold\n";
      }
      out << (r.threshold ? format_fixed(*r.threshold) : std::string("none")) << '\n';
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ContractError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const CapabilityError& e) {
    err << "capability error: " << e.what() << '\n';
    return kExitCapability;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace jury::cli
