#include "jury/rule.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "jury/error.hpp"
#include "jury/random.hpp"

namespace jury {
namespace {

void check_lengths(std::size_t weights, std::size_t votes) {
  if (weights != votes) {
    throw ContractError("weight vector has " + std::to_string(weights) + " entries but profile has " +
                        std::to_string(votes));
  }
}

Outcome classify(double margin) noexcept {
  if (margin > kTieTolerance) return Outcome::one;
  if (margin < -kTieTolerance) return Outcome::zero;
  return Outcome::tie;
}

void check_cap(std::size_t m) {
  if (m > kEnumerationCap) {
    throw CapabilityError(std::to_string(m) + " experts exceed the enumeration cap of " +
                          std::to_string(kEnumerationCap) + "; use Monte Carlo");
  }
}

// Adds the signatures of all integer weight vectors with entries in
// [lo, hi] (all-zero skipped) to `out`.
void add_integer_grid(std::size_t m, int lo, int hi, std::set<RuleSignature>& out) {
  std::vector<int> digits(m, lo);
  for (;;) {
    if (std::any_of(digits.begin(), digits.end(), [](int d) { return d != 0; })) {
      std::vector<double> w(digits.begin(), digits.end());
      out.insert(rule_signature(WeightVector(std::move(w))));
    }
    std::size_t i = 0;
    while (i < m && digits[i] == hi) digits[i++] = lo;
    if (i == m) break;
    ++digits[i];
  }
}

}  // namespace

double signed_margin(const WeightVector& weights, const VoteProfile& votes) {
  check_lengths(weights.size(), votes.size());
  double margin = 0.0;
  for (std::size_t e = 0; e < weights.size(); ++e) {
    margin += votes.vote(e) ? weights[e] : -weights[e];
  }
  return margin;
}

Outcome evaluate_wmr(const WeightVector& weights, const VoteProfile& votes) {
  return classify(signed_margin(weights, votes));
}

WeightVector effective_weights(const WeightVector& weights) {
  const bool all_zero = std::all_of(weights.begin(), weights.end(),
                                    [](double w) { return std::abs(w) < kZeroWeightTolerance; });
  if (all_zero) return WeightVector(std::vector<double>(weights.size(), 1.0));
  return weights;
}

RuleSignature::RuleSignature(std::size_t experts, std::vector<Outcome> outcomes)
    : experts_(experts), outcomes_(std::move(outcomes)) {
  if (experts_ >= 64 || outcomes_.size() != (std::size_t{1} << experts_)) {
    throw ContractError("signature needs exactly 2^m outcomes");
  }
}

bool RuleSignature::decisive() const {
  return std::none_of(outcomes_.begin(), outcomes_.end(), [](Outcome o) { return o == Outcome::tie; });
}

RuleSignature RuleSignature::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != experts_) throw ContractError("permutation length must equal expert count");
  std::vector<Outcome> out(outcomes_.size());
  for (std::uint64_t s = 0; s < outcomes_.size(); ++s) {
    std::uint64_t source = 0;
    for (std::size_t e = 0; e < experts_; ++e) {
      if ((s >> e) & 1u) source |= std::uint64_t{1} << perm[e];
    }
    out[s] = outcomes_[source];
  }
  return RuleSignature(experts_, std::move(out));
}

RuleSignature rule_signature(const WeightVector& weights) {
  const std::size_t m = weights.size();
  if (m == 0) throw ContractError("rule needs at least one expert");
  check_cap(m);
  const WeightVector w = effective_weights(weights);
  std::vector<Outcome> outcomes(std::size_t{1} << m);
  for (std::uint64_t s = 0; s < outcomes.size(); ++s) {
    double margin = 0.0;
    for (std::size_t e = 0; e < m; ++e) margin += ((s >> e) & 1u) ? w[e] : -w[e];
    outcomes[s] = classify(margin);
  }
  return RuleSignature(m, std::move(outcomes));
}

bool rules_equivalent(const WeightVector& a, const WeightVector& b) {
  if (a.size() != b.size()) throw ContractError("weight vectors differ in length");
  return rule_signature(a) == rule_signature(b);
}

RuleSignature canonical_signature(const RuleSignature& sig) {
  std::vector<std::size_t> perm(sig.experts());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RuleSignature best = sig;
  do {
    RuleSignature candidate = sig.permuted(perm);
    if (candidate < best) best = std::move(candidate);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::size_t count_distinct_rules(std::size_t m, const RuleCountOptions& options) {
  if (m == 0) throw ContractError("rule count needs at least one expert");
  if (m > 5) throw CapabilityError("count_distinct_rules supports at most 5 experts");

  std::set<RuleSignature> raw;
  add_integer_grid(m, options.nonnegative_only ? 0 : -4, 4, raw);

  rng::Stream stream(options.seed, 0);
  std::vector<double> w(m);
  for (std::size_t i = 0; i < options.sample_count; ++i) {
    // Uniform on the simplex via normalized exponentials.
    double total = 0.0;
    for (auto& x : w) {
      x = -std::log(stream.uniform_open());
      total += x;
    }
    for (auto& x : w) {
      x /= total;
      if (!options.nonnegative_only && (stream() & 1u)) x = -x;
    }
    raw.insert(rule_signature(WeightVector(w)));
  }

  std::set<RuleSignature> distinct;
  for (const auto& sig : raw) {
    if (!sig.decisive()) continue;
    distinct.insert(options.up_to_permutation ? canonical_signature(sig) : sig);
  }
  return distinct.size();
}

}  // namespace jury
