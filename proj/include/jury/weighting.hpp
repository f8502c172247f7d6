#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jury/types.hpp"

namespace jury {

enum class WeightingMode {
  signed_log_odds,
  /// Negative final weights are replaced by 0.
  clamped_nonnegative,
};

/// ln(p / (1 - p)). Throws DomainError unless 0 < p < 1.
double log_odds(double p);

/// Element-wise log-odds: the optimal weighted majority rule for independent
/// experts with known competences.
WeightVector optimal_weights(const CompetenceVector& competences);

/// Probability that an expert of competence `expert` agrees with a judge of
/// competence `judge`: p_j p_e + (1 - p_j)(1 - p_e), evaluated as
/// 1/2 + 2 (p_j - 1/2)(p_e - 1/2). judge in [0,1], expert in (0,1).
double perceived_competence(double judge, double expert);

/// Log-odds of one judge's perceived competences, then clamping per mode.
WeightVector judge_weights(double judge, const CompetenceVector& experts, WeightingMode mode);

/// n x m table of judge estimates, row j = judge, column e = expert. Every
/// entry lies strictly inside (0,1). A zero-row matrix is representable;
/// panel_weights rejects it.
class EstimateMatrix {
 public:
  EstimateMatrix(std::size_t judges, std::size_t experts, std::vector<double> row_major);

  std::size_t judges() const noexcept { return judges_; }
  std::size_t experts() const noexcept { return experts_; }
  double operator()(std::size_t judge, std::size_t expert) const {
    return values_[judge * experts_ + expert];
  }
  std::span<const double> row(std::size_t judge) const {
    return std::span<const double>(values_).subspan(judge * experts_, experts_);
  }

 private:
  std::size_t judges_;
  std::size_t experts_;
  std::vector<double> values_;
};

/// Per-expert mean over judges of log-odds estimates, then clamping per mode.
/// Throws ContractError for an empty judge set.
WeightVector panel_weights(const EstimateMatrix& estimates, WeightingMode mode);

/// Perceived-competence matrix for a judge panel (closed bounds allowed)
/// fed into panel_weights.
EstimateMatrix perceived_estimates(const CompetenceVector& judges, const CompetenceVector& experts);
WeightVector panel_weights_from_competences(const CompetenceVector& judges,
                                            const CompetenceVector& experts, WeightingMode mode);

/// (prod_j p_j / (1 - p_j))^(1/n), computed through the mean of log-odds.
double geometric_mean_odds(std::span<const double> estimates);

/// Averaged weight minus optimal weight for one expert whose estimate has
/// odds alpha * odds(true_p). Equals ln(alpha).
double weight_error_under_bias(double true_p, double alpha);

struct ThresholdResult {
  /// Smallest judge competence in (1/2, 1] whose weighting reproduces the
  /// optimal rule, accurate to the bisection tolerance; empty if none.
  std::optional<double> threshold;
  /// A grid point above the threshold failed to reproduce the optimal rule.
  bool non_monotone = false;
};

inline constexpr double kThresholdTolerance = 1e-4;

/// Scans p_j = 1/2 + k * grid_step (plus p_j = 1), then bisects the
/// bracketing interval on rule-signature equality down to
/// kThresholdTolerance. Returns the upper end of the final bracket.
ThresholdResult find_optimality_threshold(const CompetenceVector& experts, double grid_step = 0.001);

}  // namespace jury
