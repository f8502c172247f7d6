#include "jury/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jury/error.hpp"
#include "jury/random.hpp"
#include "jury/rule.hpp"

namespace jury {
namespace {

constexpr std::size_t kLowBlock = 12;

void check_inputs(const CompetenceVector& p, const WeightVector& w) {
  if (p.size() != w.size()) {
    throw ContractError("competences (" + std::to_string(p.size()) + ") and weights (" +
                        std::to_string(w.size()) + ") differ in length");
  }
}

void check_cap(std::size_t m) {
  if (m > kEnumerationCap) {
    throw CapabilityError(std::to_string(m) + " experts exceed the enumeration cap of " +
                          std::to_string(kEnumerationCap) + "; use Monte Carlo");
  }
}

double credit(double margin) noexcept {
  if (margin > kTieTolerance) return 1.0;
  if (margin < -kTieTolerance) return 0.0;
  return 0.5;
}

// Margin and probability of every profile over experts [0, count).
struct ProfileTable {
  std::vector<double> margin;
  std::vector<double> prob;
};

ProfileTable tabulate(std::span<const double> w, std::span<const double> p, std::size_t count) {
  const std::size_t n = std::size_t{1} << count;
  ProfileTable t{std::vector<double>(n), std::vector<double>(n)};
  t.margin[0] = 0.0;
  t.prob[0] = 1.0;
  for (std::size_t e = 0, size = 1; e < count; ++e, size <<= 1) {
    for (std::size_t s = 0; s < size; ++s) {
      t.margin[s + size] = t.margin[s] + w[e];
      t.prob[s + size] = t.prob[s] * p[e];
      t.margin[s] = t.margin[s] - w[e];
      t.prob[s] = t.prob[s] * (1.0 - p[e]);
    }
  }
  return t;
}

bool mc_trial(std::span<const double> w, std::span<const double> p, rng::Stream& stream) {
  double margin = 0.0;
  for (std::size_t e = 0; e < w.size(); ++e) {
    margin += stream.uniform() < p[e] ? w[e] : -w[e];
  }
  if (margin > kTieTolerance) return true;
  if (margin < -kTieTolerance) return false;
  return (stream() & 1u) != 0;
}

AccuracyEstimate binomial_estimate(std::uint64_t hits, std::uint64_t iterations) {
  const double n = static_cast<double>(iterations);
  const double mean = static_cast<double>(hits) / n;
  return {mean, std::sqrt(mean * (1.0 - mean) / n), iterations};
}

}  // namespace

AccuracyEstimate exact_accuracy(const CompetenceVector& competences, const WeightVector& weights,
                                Execution exec) {
  check_inputs(competences, weights);
  const std::size_t m = competences.size();
  check_cap(m);

  const WeightVector eff = effective_weights(weights);
  const auto w = eff.values();
  const auto p = competences.values();

  const std::size_t low_bits = std::min(m, kLowBlock);
  const std::size_t high_bits = m - low_bits;
  const ProfileTable low = tabulate(w, p, low_bits);
  const std::size_t low_count = low.margin.size();
  const auto high_count = static_cast<std::int64_t>(std::size_t{1} << high_bits);

  std::vector<double> partial(static_cast<std::size_t>(high_count));
#pragma omp parallel for schedule(static) if (exec == Execution::parallel && high_count > 1)
  for (std::int64_t h = 0; h < high_count; ++h) {
    double high_margin = 0.0;
    double high_prob = 1.0;
    for (std::size_t b = 0; b < high_bits; ++b) {
      const std::size_t e = low_bits + b;
      const bool vote = (static_cast<std::uint64_t>(h) >> b) & 1u;
      high_margin += vote ? w[e] : -w[e];
      high_prob *= vote ? p[e] : 1.0 - p[e];
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < low_count; ++l) {
      sum += low.prob[l] * credit(low.margin[l] + high_margin);
    }
    partial[static_cast<std::size_t>(h)] = sum * high_prob;
  }

  double total = 0.0;
  for (double s : partial) total += s;
  return {std::clamp(total, 0.0, 1.0), 0.0, 0};
}

AccuracyEstimate exact_accuracy_reference(const CompetenceVector& competences,
                                          const WeightVector& weights) {
  check_inputs(competences, weights);
  const std::size_t m = competences.size();
  check_cap(m);
  const WeightVector w = effective_weights(weights);

  double total = 0.0;
  const std::uint64_t profiles = std::uint64_t{1} << m;
  for (std::uint64_t s = 0; s < profiles; ++s) {
    double margin = 0.0;
    double prob = 1.0;
    for (std::size_t e = 0; e < m; ++e) {
      const bool vote = (s >> e) & 1u;
      margin += vote ? w[e] : -w[e];
      prob *= vote ? competences[e] : 1.0 - competences[e];
    }
    total += prob * credit(margin);
  }
  return {std::clamp(total, 0.0, 1.0), 0.0, 0};
}

AccuracyEstimate mc_accuracy(const CompetenceVector& competences, const WeightVector& weights,
                             std::uint64_t iterations, std::uint64_t seed, Execution exec) {
  check_inputs(competences, weights);
  if (iterations == 0) throw ContractError("Monte Carlo needs at least one iteration");
  const WeightVector eff = effective_weights(weights);
  const auto w = eff.values();
  const auto p = competences.values();

  const auto n = static_cast<std::int64_t>(iterations);
  std::uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits) if (exec == Execution::parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    rng::Stream stream(seed, static_cast<std::uint64_t>(i));
    hits += mc_trial(w, p, stream) ? 1u : 0u;
  }
  return binomial_estimate(hits, iterations);
}

AccuracyEstimate mc_accuracy_reference(const CompetenceVector& competences,
                                       const WeightVector& weights, std::uint64_t iterations,
                                       std::uint64_t seed) {
  check_inputs(competences, weights);
  if (iterations == 0) throw ContractError("Monte Carlo needs at least one iteration");
  const WeightVector eff = effective_weights(weights);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    rng::Stream stream(seed, i);
    if (mc_trial(eff.values(), competences.values(), stream)) ++hits;
  }
  return binomial_estimate(hits, iterations);
}

}  // namespace jury
