#include "jury/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

#include "jury/error.hpp"
#include "jury/format.hpp"

namespace jury {
namespace {

// Collects the first exception thrown inside an OpenMP loop body so it can
// be rethrown on the calling thread.
class LoopErrors {
 public:
  template <typename F>
  void run(F&& body) noexcept {
    try {
      body();
    } catch (...) {
#pragma omp critical(jury_loop_errors)
      if (!first_) first_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::exception_ptr first_;
};

std::string mode_name(WeightingMode mode) {
  return mode == WeightingMode::signed_log_odds ? "signed" : "clamped";
}

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ContractError("judge grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
      throw DomainError("judge grid value " + format_double(grid[i]) + " is outside [0,1]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ContractError("judge grid must be strictly increasing");
    }
  }
}

void check_iterations(std::uint64_t iterations) {
  if (iterations == 0) throw ContractError("iterations must be at least 1");
  if (iterations >= (std::uint64_t{1} << 40)) throw ContractError("iterations must be below 2^40");
}

void check_expert_count(std::size_t m) {
  if (m == 0) throw ContractError("at least one expert required");
  if (m > kEnumerationCap) {
    throw CapabilityError(std::to_string(m) + " experts exceed the enumeration cap of " +
                          std::to_string(kEnumerationCap));
  }
}

// Sample mean and standard error, both accumulated in index order.
ResultRow summarize(double x, std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {x, std::clamp(mean, 0.0, 1.0), se, values.size()};
}

double single_judge_accuracy(double judge, const CompetenceVector& experts, WeightingMode mode) {
  return exact_accuracy(experts, judge_weights(judge, experts, mode), Execution::serial).mean;
}

double partition_accuracy(std::span<const double> agents, std::span<const std::size_t> order,
                          std::size_t k, WeightingMode mode) {
  std::vector<double> judges;
  std::vector<double> experts;
  judges.reserve(k);
  experts.reserve(agents.size() - k);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < k ? judges : experts).push_back(agents[order[i]]);
  }
  const CompetenceVector expert_panel(std::move(experts));
  if (k == 0) {
    return exact_accuracy(expert_panel, WeightVector(std::vector<double>(expert_panel.size(), 1.0)),
                          Execution::serial)
        .mean;
  }
  const CompetenceVector judge_panel(std::move(judges), Bounds::closed);
  return exact_accuracy(expert_panel, panel_weights_from_competences(judge_panel, expert_panel, mode),
                        Execution::serial)
      .mean;
}

// Draws N agents and a uniformly random ordering of them from one stream.
void draw_agents(const rng::Distribution& dist, rng::Stream& stream, std::span<double> agents,
                 std::vector<std::size_t>& order) {
  for (double& a : agents) a = dist(stream);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(stream.below(i));
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && std::isfinite(step))) {
    throw DomainError("grid bounds must be finite");
  }
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (!(hi >= lo)) throw DomainError("grid upper bound is below lower bound");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    grid[i] = std::round(v * 1e12) / 1e12;
  }
  return grid;
}

std::vector<double> default_judge_grid() { return make_grid(0.0, 1.0, 0.01); }

std::vector<std::size_t> default_judge_counts(std::size_t total_agents) {
  std::vector<std::size_t> counts;
  if (total_agents == 0) return counts;
  const std::size_t last = std::min(total_agents / 2 + 1, total_agents - 1);
  for (std::size_t k = 0; k <= last; ++k) counts.push_back(k);
  return counts;
}

ResultTable fixed_expert_sweep(const CompetenceVector& experts, const std::vector<double>& judge_grid,
                               WeightingMode mode, Execution exec) {
  check_grid(judge_grid);
  check_expert_count(experts.size());

  ResultTable table;
  table.x_label = "p_j";
  table.rows.resize(judge_grid.size());
  table.metadata = {{"experts", join(experts.values())},
                    {"mode", mode_name(mode)},
                    {"grid_points", std::to_string(judge_grid.size())}};

  const auto n = static_cast<std::int64_t>(judge_grid.size());
  LoopErrors errors;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (std::int64_t g = 0; g < n; ++g) {
    errors.run([&] {
      const auto i = static_cast<std::size_t>(g);
      table.rows[i] = {judge_grid[i], single_judge_accuracy(judge_grid[i], experts, mode), 0.0, 0};
    });
  }
  errors.rethrow();
  return table;
}

ResultTable distribution_sweep(const SweepConfig& config, Execution exec) {
  if (const auto* fixed = std::get_if<CompetenceVector>(&config.experts)) {
    return fixed_expert_sweep(*fixed, config.judge_grid, config.mode, exec);
  }
  const auto& drawn = std::get<DrawnExperts>(config.experts);
  check_grid(config.judge_grid);
  check_expert_count(drawn.count);
  check_iterations(config.iterations);
  const rng::Distribution dist(drawn.distribution);

  const std::size_t m = drawn.count;
  const auto n = static_cast<std::int64_t>(config.iterations);
  std::vector<double> draws(static_cast<std::size_t>(n) * m);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    rng::Stream stream(config.seed, static_cast<std::uint64_t>(i));
    for (std::size_t e = 0; e < m; ++e) draws[static_cast<std::size_t>(i) * m + e] = dist(stream);
  }

  ResultTable table;
  table.x_label = "p_j";
  table.metadata = {{"distribution", rng::to_string(drawn.distribution)},
                    {"m", std::to_string(m)},
                    {"iterations", std::to_string(config.iterations)},
                    {"seed", std::to_string(config.seed)},
                    {"mode", mode_name(config.mode)},
                    {"grid_points", std::to_string(config.judge_grid.size())}};

  std::vector<double> acc(static_cast<std::size_t>(n));
  LoopErrors errors;
  for (double judge : config.judge_grid) {
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (std::int64_t i = 0; i < n; ++i) {
      errors.run([&] {
        const auto first = draws.begin() + i * static_cast<std::int64_t>(m);
        const CompetenceVector experts(std::vector<double>(first, first + static_cast<std::int64_t>(m)));
        acc[static_cast<std::size_t>(i)] = single_judge_accuracy(judge, experts, config.mode);
      });
    }
    errors.rethrow();
    table.rows.push_back(summarize(judge, acc));
  }
  return table;
}

ResultTable partition_experiment(const PartitionConfig& config, Execution exec) {
  const std::size_t total = config.total_agents;
  if (total == 0) throw ContractError("at least one agent required");
  std::vector<std::size_t> counts =
      config.judge_counts.empty() ? default_judge_counts(total) : config.judge_counts;
  for (std::size_t k : counts) {
    if (k >= total) {
      throw ContractError("judge count " + std::to_string(k) + " leaves no expert: at least one expert required");
    }
  }
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  check_expert_count(total - counts.front());
  check_iterations(config.iterations);
  const rng::Distribution dist(config.distribution);

  const std::size_t K = counts.size();
  const auto n = static_cast<std::int64_t>(config.iterations);
  const auto n_size = static_cast<std::size_t>(n);
  std::vector<double> acc(K * n_size);

  LoopErrors errors;
#pragma omp parallel if (exec == Execution::parallel)
  {
    std::vector<double> agents(total);
    std::vector<std::size_t> order(total);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      errors.run([&] {
        const auto it = static_cast<std::uint64_t>(i);
        if (config.paired) {
          rng::Stream stream(config.seed, it);
          draw_agents(dist, stream, agents, order);
          for (std::size_t c = 0; c < K; ++c) {
            acc[c * n_size + it] = partition_accuracy(agents, order, counts[c], config.mode);
          }
        } else {
          for (std::size_t c = 0; c < K; ++c) {
            rng::Stream stream(config.seed, (std::uint64_t{c + 1} << 40) | it);
            draw_agents(dist, stream, agents, order);
            acc[c * n_size + it] = partition_accuracy(agents, order, counts[c], config.mode);
          }
        }
      });
    }
  }
  errors.rethrow();

  ResultTable table;
  table.x_label = "k_judges";
  table.metadata = {{"n", std::to_string(total)},
                    {"distribution", rng::to_string(config.distribution)},
                    {"iterations", std::to_string(config.iterations)},
                    {"seed", std::to_string(config.seed)},
                    {"mode", mode_name(config.mode)},
                    {"paired", config.paired ? "true" : "false"}};
  for (std::size_t c = 0; c < K; ++c) {
    table.rows.push_back(summarize(static_cast<double>(counts[c]),
                                   std::span<const double>(acc).subspan(c * n_size, n_size)));
  }
  return table;
}

}  // namespace jury
