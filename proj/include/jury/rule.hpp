#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jury/types.hpp"

namespace jury {

/// Sum of weights of 1-voters minus weights of 0-voters, accumulated in
/// expert order.
double signed_margin(const WeightVector& weights, const VoteProfile& votes);

/// Weighted majority outcome for one profile. No zero-weight fallback here:
/// an all-zero vector ties on every profile.
Outcome evaluate_wmr(const WeightVector& weights, const VoteProfile& votes);

/// Weights actually used by a rule: if every |w| < kZeroWeightTolerance the
/// vector is replaced by all ones (simple majority), otherwise unchanged.
WeightVector effective_weights(const WeightVector& weights);

/// Outcome of a rule on every profile, indexed by profile bit index.
class RuleSignature {
 public:
  RuleSignature(std::size_t experts, std::vector<Outcome> outcomes);

  std::size_t experts() const noexcept { return experts_; }
  std::size_t profile_count() const noexcept { return outcomes_.size(); }
  Outcome operator[](std::uint64_t profile) const { return outcomes_[profile]; }
  const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }

  /// True if no profile is a tie.
  bool decisive() const;

  /// Relabel experts: expert e of the result plays the role of expert
  /// perm[e] of this rule.
  RuleSignature permuted(const std::vector<std::size_t>& perm) const;

  friend bool operator==(const RuleSignature&, const RuleSignature&) = default;
  friend auto operator<=>(const RuleSignature& a, const RuleSignature& b) {
    return a.outcomes_ <=> b.outcomes_;
  }

 private:
  std::size_t experts_;
  std::vector<Outcome> outcomes_;
};

/// Evaluates the rule (after the zero-weight fallback) on all 2^m profiles.
/// Throws CapabilityError above kEnumerationCap.
RuleSignature rule_signature(const WeightVector& weights);

bool rules_equivalent(const WeightVector& a, const WeightVector& b);

/// Lexicographically smallest signature over all relabelings of experts.
RuleSignature canonical_signature(const RuleSignature& sig);

struct RuleCountOptions {
  std::size_t sample_count = 20000;
  std::uint64_t seed = 0;
  bool nonnegative_only = true;
  bool up_to_permutation = true;
};

/// Lower bound on the number of distinct decisive weighted majority rules on
/// m experts, found by sampling weights from the unit simplex (random signs
/// unless nonnegative_only) plus every integer vector with entries in
/// [-4, 4] (or [0, 4]). Saturates for m <= 5. Throws CapabilityError for
/// m > 5 and ContractError for m == 0.
std::size_t count_distinct_rules(std::size_t m, const RuleCountOptions& options);

}  // namespace jury
