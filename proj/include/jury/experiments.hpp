#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jury/accuracy.hpp"
#include "jury/random.hpp"
#include "jury/types.hpp"
#include "jury/weighting.hpp"

namespace jury {

struct ResultRow {
  double x = 0.0;
  double accuracy_mean = 0.0;
  double accuracy_stderr = 0.0;
  std::uint64_t iterations = 0;
};

/// Aggregated experiment output. Rows are sorted by unique x; metadata
/// echoes the configuration as key/value text.
struct ResultTable {
  std::string x_label;
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Experts drawn i.i.d. per iteration instead of fixed.
struct DrawnExperts {
  std::size_t count = 5;
  rng::DistributionSpec distribution;
};

struct SweepConfig {
  std::variant<CompetenceVector, DrawnExperts> experts;
  std::vector<double> judge_grid;
  std::uint64_t iterations = 100000;
  std::uint64_t seed = 0;
  WeightingMode mode = WeightingMode::signed_log_odds;
};

struct PartitionConfig {
  std::size_t total_agents = 5;
  std::vector<std::size_t> judge_counts;
  rng::DistributionSpec distribution;
  std::uint64_t iterations = 100000;
  std::uint64_t seed = 0;
  WeightingMode mode = WeightingMode::signed_log_odds;
  /// Reuse one draw of the agents across every judge count per iteration.
  bool paired = true;
};

/// p_j = lo, lo + step, ..., up to hi (inclusive within 1e-9), each value
/// rounded to 12 decimals so that decimal grids print cleanly.
std::vector<double> make_grid(double lo, double hi, double step);

/// Default judge grid 0.00, 0.01, ..., 1.00.
std::vector<double> default_judge_grid();

/// Default judge counts 0 .. floor(N/2)+1, capped at N-1.
std::vector<std::size_t> default_judge_counts(std::size_t total_agents);

/// Exact accuracy of the single-judge weighting for every grid point.
ResultTable fixed_expert_sweep(const CompetenceVector& experts, const std::vector<double>& judge_grid,
                               WeightingMode mode, Execution exec = Execution::parallel);

/// Single-judge sweep. Fixed experts delegate to fixed_expert_sweep; drawn
/// experts use stream (seed, i) for iteration i, so every grid point sees
/// the same expert draws and the table is independent of thread count.
ResultTable distribution_sweep(const SweepConfig& config, Execution exec = Execution::parallel);

/// Judges-vs-experts split. Per iteration draws N agents, picks a uniformly
/// random k-subset as non-voting judges and scores the remaining experts
/// exactly. k = 0 is simple majority over all N.
ResultTable partition_experiment(const PartitionConfig& config, Execution exec = Execution::parallel);

}  // namespace jury
