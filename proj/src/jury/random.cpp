#include "jury/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <type_traits>

#include "jury/error.hpp"
#include "jury/format.hpp"

namespace jury::rng {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr double kInteriorLo = 0x1.0p-53;
constexpr double kInteriorHi = 1.0 - 0x1.0p-53;

PhiloxCounter philox_round(const PhiloxCounter& c, const PhiloxKey& k) noexcept {
  const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * c[0];
  const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double clamp_interior(double v, double lo, double hi) {
  return std::clamp(v, std::max(lo, kInteriorLo), std::min(hi, kInteriorHi));
}

void check_support(double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw DomainError("distribution support must satisfy 0 <= lo < hi <= 1");
  }
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept {
  counter = philox_round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
    counter = philox_round(counter, key);
  }
  return counter;
}

Stream::Stream(SeedSpec seed) noexcept
    : key_{static_cast<std::uint32_t>(seed.master_seed),
           static_cast<std::uint32_t>(seed.master_seed >> 32)},
      stream_(seed.stream_id) {}

void Stream::refill() noexcept {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(block_),
                          static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_),
                          static_cast<std::uint32_t>(stream_ >> 32)};
  buffer_ = philox4x32_10(ctr, key_);
  ++block_;
  used_ = 0;
}

Stream::result_type Stream::operator()() noexcept {
  if (used_ > 2) refill();
  const std::uint64_t v = (std::uint64_t{buffer_[used_]} << 32) | buffer_[used_ + 1];
  used_ += 2;
  return v;
}

double Stream::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Stream::uniform_open() noexcept {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::normal() noexcept {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Stream::below(std::uint64_t n) noexcept {
  // 2^64 mod n; values below it would bias the remainder.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = (*this)();
    if (x >= threshold) return x % n;
  }
}

std::string to_string(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return "uniform:" + format_double(d.lo) + ":" + format_double(d.hi);
        } else if constexpr (std::is_same_v<T, TruncNormal>) {
          return "truncnormal:" + format_double(d.mean) + ":" + format_double(d.sigma) + ":" +
                 format_double(d.lo) + ":" + format_double(d.hi);
        } else {
          return "truncexp:" + format_double(d.b) + ":" + format_double(d.lo) + ":" +
                 format_double(d.hi) + (d.mirrored ? ":mirror" : "");
        }
      },
      spec);
}

Distribution::Distribution(DistributionSpec spec) : spec_(spec) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        check_support(d.lo, d.hi);
        if constexpr (std::is_same_v<T, TruncNormal>) {
          if (!(std::isfinite(d.mean) && std::isfinite(d.sigma) && d.sigma > 0.0)) {
            throw DomainError("truncated normal needs finite mean and sigma > 0");
          }
          const double mass = standard_normal_cdf((d.hi - d.mean) / d.sigma) -
                              standard_normal_cdf((d.lo - d.mean) / d.sigma);
          if (!(mass >= 1e-6)) {
            throw DomainError("truncated normal keeps less than 1e-6 of its mass in [lo, hi]");
          }
        } else if constexpr (std::is_same_v<T, TruncExp>) {
          if (!(std::isfinite(d.b) && d.b > 0.0)) {
            throw DomainError("truncated exponential needs finite b > 0");
          }
        }
      },
      spec_);
}

double Distribution::lo() const noexcept {
  return std::visit([](const auto& d) { return d.lo; }, spec_);
}

double Distribution::hi() const noexcept {
  return std::visit([](const auto& d) { return d.hi; }, spec_);
}

double Distribution::operator()(Stream& stream) const {
  return std::visit(
      [&stream](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return clamp_interior(d.lo + stream.uniform() * (d.hi - d.lo), d.lo, d.hi);
        } else if constexpr (std::is_same_v<T, TruncNormal>) {
          for (;;) {
            const double x = d.mean + d.sigma * stream.normal();
            if (x >= d.lo && x <= d.hi) return clamp_interior(x, d.lo, d.hi);
          }
        } else {
          // Inverse CDF of e^{-x}/(1-e^{-b}) on [0, b].
          const double u = stream.uniform();
          const double x = -std::log1p(-u * -std::expm1(-d.b));
          double t = std::min(x / d.b, 1.0);
          if (d.mirrored) t = 1.0 - t;
          return clamp_interior(d.lo + t * (d.hi - d.lo), d.lo, d.hi);
        }
      },
      spec_);
}

std::vector<double> sample(const Distribution& dist, SeedSpec seed, std::size_t count) {
  Stream stream(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = dist(stream);
  return out;
}

}  // namespace jury::rng
