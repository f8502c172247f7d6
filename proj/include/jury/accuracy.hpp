#pragma once

#include <cstdint>

#include "jury/types.hpp"

namespace jury {

/// Whether a kernel may fan out over OpenMP threads. Results are identical
/// either way; `serial` exists so callers already inside a parallel region
/// avoid nested teams.
enum class Execution { serial, parallel };

/// Exact accuracy: sum over all 2^m profiles of profile probability times
/// credit (1 for ONE, 0 for ZERO, 1/2 for TIE), after the zero-weight
/// fallback.
///
/// Profiles are split into a low block of up to 12 experts, tabulated once,
/// and a high block enumerated in parallel. Each high pattern contributes a
/// partial sum that is reduced in index order, so the result does not depend
/// on the thread count.
///
/// Throws ContractError on length mismatch and CapabilityError when m
/// exceeds kEnumerationCap.
AccuracyEstimate exact_accuracy(const CompetenceVector& competences, const WeightVector& weights,
                                Execution exec = Execution::parallel);

/// Straight enumeration in profile index order. Reference for tests and
/// benchmarks; agrees with exact_accuracy to rounding.
AccuracyEstimate exact_accuracy_reference(const CompetenceVector& competences,
                                          const WeightVector& weights);

/// Monte-Carlo accuracy. Iteration i draws its votes (and, on a tie, one
/// fair coin) from stream (seed, i); hits are counted as integers, so the
/// estimate is bit-identical for any thread count. std_error is the
/// binomial standard error of the sample mean.
AccuracyEstimate mc_accuracy(const CompetenceVector& competences, const WeightVector& weights,
                             std::uint64_t iterations, std::uint64_t seed,
                             Execution exec = Execution::parallel);

/// Single-threaded loop over the same per-iteration streams.
AccuracyEstimate mc_accuracy_reference(const CompetenceVector& competences,
                                       const WeightVector& weights, std::uint64_t iterations,
                                       std::uint64_t seed);

}  // namespace jury
