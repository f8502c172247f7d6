#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace jury::rng {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 block function with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Counter-based random stream. The key is the master seed, the upper half
/// of the counter is the stream id and the lower half counts blocks, so any
/// (seed, stream) pair can be opened independently on any thread and yields
/// the same sequence on every platform.
///
/// Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(SeedSpec seed) noexcept;
  Stream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : Stream(SeedSpec{master_seed, stream_id}) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;
  /// Standard normal via Box-Muller (one variate per call).
  double normal() noexcept;
  /// Unbiased integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  void refill() noexcept;

  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  unsigned used_ = 4;
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};

struct TruncNormal {
  double mean = 0.5;
  double sigma = 0.1;
  double lo = 0.0;
  double hi = 1.0;
};

/// Density e^{-x} / (1 - e^{-b}) on [0, b], mapped affinely x/b -> [lo, hi].
/// `mirrored` flips the map so the mass sits near hi instead of lo.
struct TruncExp {
  double b = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  bool mirrored = false;
};

using DistributionSpec = std::variant<Uniform, TruncNormal, TruncExp>;

/// Canonical text form, e.g. "uniform:0.001:0.999", "truncnormal:0.5:0.1:0.001:0.999",
/// "truncexp:1:0.501:0.999" (":mirror" appended when mirrored).
std::string to_string(const DistributionSpec& spec);

/// Validated sampler. Construction throws DomainError for an invalid spec;
/// drawing never fails.
class Distribution {
 public:
  explicit Distribution(DistributionSpec spec);

  const DistributionSpec& spec() const noexcept { return spec_; }
  double lo() const noexcept;
  double hi() const noexcept;

  double operator()(Stream& stream) const;

 private:
  DistributionSpec spec_;
};

/// `count` draws from a fresh stream opened at `seed`.
std::vector<double> sample(const Distribution& dist, SeedSpec seed, std::size_t count);

}  // namespace jury::rng
