#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace jury {

/// Margins with |margin| <= kTieTolerance are ties.
inline constexpr double kTieTolerance = 1e-12;

/// Weights with |w| < kZeroWeightTolerance count as zero for the
/// all-zero fallback to simple majority.
inline constexpr double kZeroWeightTolerance = 1e-12;

/// Largest expert count accepted by exact enumeration (2^22 profiles).
inline constexpr std::size_t kEnumerationCap = 22;

enum class Outcome : std::uint8_t { zero = 0, one = 1, tie = 2 };

constexpr Outcome complement(Outcome o) noexcept {
  switch (o) {
    case Outcome::one:
      return Outcome::zero;
    case Outcome::zero:
      return Outcome::one;
    default:
      return Outcome::tie;
  }
}

/// Expert competences live in the open interval; judges in the sweeps may sit
/// on the endpoints.
enum class Bounds { open, closed };

/// Ordered, fixed-length list of competences. Entries are validated on
/// construction against `bounds`.
class CompetenceVector {
 public:
  explicit CompetenceVector(std::vector<double> values, Bounds bounds = Bounds::open);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  Bounds bounds() const noexcept { return bounds_; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const CompetenceVector&, const CompetenceVector&) = default;

 private:
  std::vector<double> values_;
  Bounds bounds_;
};

/// Finite real expert weights. No normalization is imposed.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> values() const noexcept { return weights_; }

  auto begin() const noexcept { return weights_.begin(); }
  auto end() const noexcept { return weights_.end(); }

  WeightVector scaled(double factor) const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> weights_;
};

/// One vote per expert, 1 = correct alternative.
///
/// Profiles are also addressed by a bit index in [0, 2^m): bit e holds the
/// vote of expert e. Rule signatures and the enumeration kernels use that
/// ordering.
class VoteProfile {
 public:
  explicit VoteProfile(std::vector<std::uint8_t> votes);
  static VoteProfile from_index(std::uint64_t index, std::size_t experts);

  std::size_t size() const noexcept { return votes_.size(); }
  bool vote(std::size_t e) const { return votes_[e] != 0; }
  std::uint64_t index() const;
  VoteProfile complemented() const;

 private:
  std::vector<std::uint8_t> votes_;
};

/// Accuracy of a rule. Exact results carry std_error = 0 and iterations = 0.
struct AccuracyEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t iterations = 0;

  bool exact() const noexcept { return iterations == 0; }
};

}  // namespace jury
