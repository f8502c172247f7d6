#include "jury/types.hpp"

#include <cmath>
#include <string>

#include "jury/error.hpp"

namespace jury {

CompetenceVector::CompetenceVector(std::vector<double> values, Bounds bounds)
    : values_(std::move(values)), bounds_(bounds) {
  if (values_.empty()) throw ContractError("competence vector must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double p = values_[i];
    const bool ok = bounds_ == Bounds::open ? (p > 0.0 && p < 1.0) : (p >= 0.0 && p <= 1.0);
    if (!ok) {
      throw DomainError("competence " + std::to_string(i) + " = " + std::to_string(p) +
                        (bounds_ == Bounds::open ? " is not in (0,1)" : " is not in [0,1]"));
    }
  }
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i])) {
      throw DomainError("weight " + std::to_string(i) + " is not finite");
    }
  }
}

WeightVector WeightVector::scaled(double factor) const {
  std::vector<double> out(weights_);
  for (double& w : out) w *= factor;
  return WeightVector(std::move(out));
}

VoteProfile::VoteProfile(std::vector<std::uint8_t> votes) : votes_(std::move(votes)) {
  for (auto v : votes_) {
    if (v > 1) throw ContractError("votes must be 0 or 1");
  }
}

VoteProfile VoteProfile::from_index(std::uint64_t index, std::size_t experts) {
  if (experts > 64) throw ContractError("profile index supports at most 64 experts");
  std::vector<std::uint8_t> votes(experts);
  for (std::size_t e = 0; e < experts; ++e) votes[e] = static_cast<std::uint8_t>((index >> e) & 1u);
  return VoteProfile(std::move(votes));
}

std::uint64_t VoteProfile::index() const {
  if (votes_.size() > 64) throw ContractError("profile index supports at most 64 experts");
  std::uint64_t idx = 0;
  for (std::size_t e = 0; e < votes_.size(); ++e) idx |= std::uint64_t{votes_[e]} << e;
  return idx;
}

VoteProfile VoteProfile::complemented() const {
  std::vector<std::uint8_t> flipped(votes_.size());
  for (std::size_t e = 0; e < votes_.size(); ++e) flipped[e] = votes_[e] ? 0 : 1;
  return VoteProfile(std::move(flipped));
}

}  // namespace jury
