#include "jury/weighting.hpp"

#include <cmath>
#include <string>

#include "jury/error.hpp"
#include "jury/rule.hpp"

namespace jury {
namespace {

void clamp_if_needed(std::vector<double>& w, WeightingMode mode) {
  if (mode != WeightingMode::clamped_nonnegative) return;
  for (double& x : w) {
    if (x < 0.0) x = 0.0;
  }
}

}  // namespace

double log_odds(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("log-odds needs 0 < p < 1, got " + std::to_string(p));
  }
  return std::log(p / (1.0 - p));
}

WeightVector optimal_weights(const CompetenceVector& competences) {
  std::vector<double> w;
  w.reserve(competences.size());
  for (double p : competences) w.push_back(log_odds(p));
  return WeightVector(std::move(w));
}

double perceived_competence(double judge, double expert) {
  if (!(judge >= 0.0 && judge <= 1.0)) {
    throw DomainError("judge competence must lie in [0,1], got " + std::to_string(judge));
  }
  if (!(expert > 0.0 && expert < 1.0)) {
    throw DomainError("expert competence must lie in (0,1), got " + std::to_string(expert));
  }
  return 0.5 + 2.0 * (judge - 0.5) * (expert - 0.5);
}

WeightVector judge_weights(double judge, const CompetenceVector& experts, WeightingMode mode) {
  std::vector<double> w;
  w.reserve(experts.size());
  for (double p : experts) w.push_back(log_odds(perceived_competence(judge, p)));
  clamp_if_needed(w, mode);
  return WeightVector(std::move(w));
}

EstimateMatrix::EstimateMatrix(std::size_t judges, std::size_t experts, std::vector<double> row_major)
    : judges_(judges), experts_(experts), values_(std::move(row_major)) {
  if (values_.size() != judges_ * experts_) {
    throw ContractError("estimate matrix needs judges * experts entries");
  }
  for (double v : values_) {
    if (!(v > 0.0 && v < 1.0)) {
      throw DomainError("competence estimates must lie in (0,1), got " + std::to_string(v));
    }
  }
}

WeightVector panel_weights(const EstimateMatrix& estimates, WeightingMode mode) {
  if (estimates.judges() == 0) throw ContractError("panel weights need at least one judge");
  if (estimates.experts() == 0) throw ContractError("panel weights need at least one expert");
  std::vector<double> w(estimates.experts(), 0.0);
  for (std::size_t j = 0; j < estimates.judges(); ++j) {
    for (std::size_t e = 0; e < estimates.experts(); ++e) w[e] += log_odds(estimates(j, e));
  }
  const auto n = static_cast<double>(estimates.judges());
  for (double& x : w) x /= n;
  clamp_if_needed(w, mode);
  return WeightVector(std::move(w));
}

EstimateMatrix perceived_estimates(const CompetenceVector& judges, const CompetenceVector& experts) {
  std::vector<double> values;
  values.reserve(judges.size() * experts.size());
  for (double pj : judges) {
    for (double pe : experts) values.push_back(perceived_competence(pj, pe));
  }
  return EstimateMatrix(judges.size(), experts.size(), std::move(values));
}

WeightVector panel_weights_from_competences(const CompetenceVector& judges,
                                            const CompetenceVector& experts, WeightingMode mode) {
  return panel_weights(perceived_estimates(judges, experts), mode);
}

double geometric_mean_odds(std::span<const double> estimates) {
  if (estimates.empty()) throw ContractError("geometric mean of odds needs at least one estimate");
  double sum = 0.0;
  for (double p : estimates) sum += log_odds(p);
  return std::exp(sum / static_cast<double>(estimates.size()));
}

double weight_error_under_bias(double true_p, double alpha) {
  if (!(std::isfinite(alpha) && alpha > 0.0)) {
    throw DomainError("bias factor must be positive and finite");
  }
  const double optimal = log_odds(true_p);
  const double biased_odds = alpha * (true_p / (1.0 - true_p));
  const double estimate = biased_odds / (1.0 + biased_odds);
  if (!(estimate > 0.0 && estimate < 1.0)) {
    throw DomainError("biased odds do not yield an estimate inside (0,1)");
  }
  const WeightVector averaged =
      panel_weights(EstimateMatrix(1, 1, {estimate}), WeightingMode::signed_log_odds);
  return averaged[0] - optimal;
}

ThresholdResult find_optimality_threshold(const CompetenceVector& experts, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw DomainError("threshold grid step must lie in (0, 0.5]");
  }
  const RuleSignature target = rule_signature(optimal_weights(experts));
  const auto matches = [&](double judge) {
    return rule_signature(judge_weights(judge, experts, WeightingMode::signed_log_odds)) == target;
  };

  std::vector<double> grid;
  for (std::size_t k = 1;; ++k) {
    const double pj = 0.5 + static_cast<double>(k) * grid_step;
    if (pj >= 1.0) break;
    grid.push_back(pj);
  }
  grid.push_back(1.0);

  ThresholdResult result;
  std::size_t first = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (matches(grid[i])) {
      first = i;
      break;
    }
  }
  if (first == grid.size()) return result;

  for (std::size_t i = first + 1; i < grid.size(); ++i) {
    if (!matches(grid[i])) {
      result.non_monotone = true;
      break;
    }
  }

  double lo = first == 0 ? 0.5 : grid[first - 1];
  double hi = grid[first];
  while (hi - lo > kThresholdTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (matches(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.threshold = hi;
  return result;
}

}  // namespace jury
