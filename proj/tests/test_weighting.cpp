#include <doctest.h>

#include <cmath>
#include <random>

#include "jury/accuracy.hpp"
#include "jury/error.hpp"
#include "jury/rule.hpp"
#include "jury/weighting.hpp"
#include "oracles.hpp"

using namespace jury;

namespace {

const CompetenceVector kPanel({0.6, 0.6, 0.6, 0.7, 0.9});

int sign(double x) { return (x > 0) - (x < 0); }

double from_log_odds(double l) { return 1.0 / (1.0 + std::exp(-l)); }

}  // namespace

TEST_CASE("log_odds and optimal_weights") {
  CHECK(log_odds(0.5) == 0.0);
  CHECK(log_odds(0.9) == doctest::Approx(2.1972245773));
  CHECK(log_odds(0.4) == doctest::Approx(-log_odds(0.6)));
  CHECK_THROWS_AS(log_odds(0.0), DomainError);
  CHECK_THROWS_AS(log_odds(1.0), DomainError);

  const WeightVector w = optimal_weights(kPanel);
  const double expected[5] = {0.405, 0.405, 0.405, 0.847, 2.197};
  for (std::size_t e = 0; e < 5; ++e) CHECK(std::abs(w[e] - expected[e]) <= 0.001);
  CHECK(w[0] == w[1]);
  CHECK(optimal_weights(CompetenceVector({0.5, 0.5})) == WeightVector({0, 0}));
  CHECK(optimal_weights(CompetenceVector({0.3}))[0] == doctest::Approx(-0.8472978604));
}

TEST_CASE("perceived_competence") {
  CHECK(perceived_competence(0.5, 0.83) == 0.5);
  CHECK(perceived_competence(1.0, 0.83) == doctest::Approx(0.83).epsilon(1e-15));
  CHECK(perceived_competence(0.6, 0.9) == doctest::Approx(0.58));
  CHECK(log_odds(perceived_competence(0.6, 0.9)) == doctest::Approx(0.3227).epsilon(1e-3));
  CHECK(perceived_competence(0.0, 0.83) == doctest::Approx(0.17));
  CHECK_THROWS_AS(perceived_competence(1.1, 0.5), DomainError);
  CHECK_THROWS_AS(perceived_competence(0.5, 1.0), DomainError);

  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double j = u(gen), e = 0.001 + 0.998 * u(gen);
    CHECK(perceived_competence(j, e) == doctest::Approx(j * e + (1 - j) * (1 - e)).epsilon(1e-14));
  }
}

TEST_CASE("judge_weights") {
  const WeightVector w = judge_weights(0.6, kPanel, WeightingMode::signed_log_odds);
  const double expected[5] = {0.080, 0.080, 0.080, 0.160, 0.323};
  for (std::size_t e = 0; e < 5; ++e) CHECK(std::abs(w[e] - expected[e]) <= 0.001);

  CHECK(judge_weights(0.5, kPanel, WeightingMode::signed_log_odds) == WeightVector(std::vector<double>(5, 0.0)));

  const CompetenceVector experts({0.6, 0.8});
  const WeightVector neg = judge_weights(0.4, experts, WeightingMode::signed_log_odds);
  CHECK(neg[0] < 0);
  CHECK(neg[1] < 0);
  CHECK(judge_weights(0.4, experts, WeightingMode::clamped_nonnegative) == WeightVector({0, 0}));
}

TEST_CASE("panel_weights") {
  SUBCASE("single row equals judge weights") {
    const EstimateMatrix one = perceived_estimates(CompetenceVector({0.6}, Bounds::closed), kPanel);
    const WeightVector a = panel_weights(one, WeightingMode::signed_log_odds);
    const WeightVector b = judge_weights(0.6, kPanel, WeightingMode::signed_log_odds);
    for (std::size_t e = 0; e < 5; ++e) CHECK(a[e] == doctest::Approx(b[e]).epsilon(1e-15));
  }
  SUBCASE("odds 3.0 and 0.75 average to the true odds 1.5") {
    const EstimateMatrix est(2, 1, {0.75, 0.75 / 1.75});
    CHECK(panel_weights(est, WeightingMode::signed_log_odds)[0] == doctest::Approx(std::log(1.5)).epsilon(1e-14));
    CHECK(geometric_mean_odds(est.row(0)) == doctest::Approx(3.0));
    const double column[2] = {0.75, 0.75 / 1.75};
    CHECK(geometric_mean_odds(column) == doctest::Approx(1.5).epsilon(1e-14));
  }
  SUBCASE("exact estimates give the optimal weights") {
    const EstimateMatrix est(3, 2, {0.7, 0.2, 0.7, 0.2, 0.7, 0.2});
    const WeightVector w = panel_weights(est, WeightingMode::signed_log_odds);
    CHECK(w[0] == doctest::Approx(log_odds(0.7)));
    CHECK(w[1] == doctest::Approx(log_odds(0.2)));
    CHECK(panel_weights(est, WeightingMode::clamped_nonnegative)[1] == 0.0);
  }
  SUBCASE("composition with perceived competences") {
    const auto w = panel_weights_from_competences(CompetenceVector({0.6}), kPanel, WeightingMode::signed_log_odds);
    CHECK(w[4] == doctest::Approx(0.3227).epsilon(1e-3));
    CHECK(panel_weights_from_competences(CompetenceVector({0.5, 0.5, 0.5}), kPanel, WeightingMode::signed_log_odds) ==
          WeightVector(std::vector<double>(5, 0.0)));
    const auto opt = panel_weights_from_competences(CompetenceVector({1.0}, Bounds::closed), kPanel,
                                                    WeightingMode::signed_log_odds);
    for (std::size_t e = 0; e < 5; ++e) CHECK(opt[e] == doctest::Approx(optimal_weights(kPanel)[e]));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(panel_weights(EstimateMatrix(0, 3, {}), WeightingMode::signed_log_odds), ContractError);
    CHECK_THROWS_AS(EstimateMatrix(1, 2, {0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(EstimateMatrix(1, 2, {0.5}), ContractError);
  }
  const double halves[3] = {0.5, 0.5, 0.5};
  CHECK(geometric_mean_odds(halves) == doctest::Approx(1.0));
  const double pair[2] = {0.8, 0.8};
  CHECK(geometric_mean_odds(pair) == doctest::Approx(4.0));
}

TEST_CASE("weight_error_under_bias is ln(alpha)") {
  CHECK(weight_error_under_bias(0.6, 1.0) == doctest::Approx(0.0));
  CHECK(weight_error_under_bias(0.6, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(weight_error_under_bias(0.7, 0.5) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));

  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> p(0.01, 0.99);
  std::uniform_real_distribution<double> la(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double alpha = std::exp(la(gen));
    CHECK(std::abs(weight_error_under_bias(p(gen), alpha) - std::log(alpha)) <= 1e-12);
  }
}

TEST_CASE("correct sign, order and sign inversion") {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 1 + trial % 8;
    std::vector<double> raw(m);
    for (auto& x : raw) x = 0.001 + 0.998 * u(gen);
    if (m > 2) raw[1] = raw[0];  // tied competences must get tied weights
    const CompetenceVector experts(raw);
    const WeightVector opt = optimal_weights(experts);

    const double good = 0.5 + 0.5 * u(gen) + 1e-9;
    const WeightVector w = judge_weights(std::min(good, 1.0), experts, WeightingMode::signed_log_odds);
    const double bad = 0.5 - 0.5 * u(gen) - 1e-9;
    const WeightVector inv = judge_weights(std::max(bad, 0.0), experts, WeightingMode::signed_log_odds);
    for (std::size_t e = 0; e < m; ++e) {
      REQUIRE(sign(w[e]) == sign(opt[e]));
      REQUIRE(sign(inv[e]) == -sign(opt[e]));
      for (std::size_t f = 0; f < m; ++f) {
        REQUIRE((raw[e] > raw[f]) == (w[e] > w[f]));
        REQUIRE((raw[e] == raw[f]) == (w[e] == w[f]));
      }
    }
    const WeightVector clamped = judge_weights(std::max(bad, 0.0), experts, WeightingMode::clamped_nonnegative);
    for (std::size_t e = 0; e < m; ++e) {
      REQUIRE(clamped[e] >= 0.0);
      if (inv[e] >= 0.0) REQUIRE(clamped[e] == inv[e]);
    }
  }
}

TEST_CASE("averaged estimates with correct geometric-mean odds reproduce the optimal rule") {
  std::mt19937_64 gen(57);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::normal_distribution<double> noise(0.0, 1.5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + trial % 7;
    const std::size_t n = 1 + trial % 5;
    std::vector<double> p(m);
    for (auto& x : p) x = u(gen);
    // Zero-mean log-odds offsets per expert keep the geometric mean exact.
    std::vector<double> est(n * m);
    for (std::size_t e = 0; e < m; ++e) {
      std::vector<double> off(n);
      double mean = 0.0;
      for (auto& o : off) mean += (o = noise(gen));
      mean /= static_cast<double>(n);
      for (std::size_t j = 0; j < n; ++j) est[j * m + e] = from_log_odds(oracle::logit(p[e]) + off[j] - mean);
    }
    const CompetenceVector pv(p);
    const WeightVector w = panel_weights(EstimateMatrix(n, m, est), WeightingMode::signed_log_odds);
    REQUIRE(rules_equivalent(w, optimal_weights(pv)));
  }
}

TEST_CASE("multi-judge correct sign") {
  std::mt19937_64 gen(63);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::normal_distribution<double> noise(0.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + trial % 6;
    const std::size_t n = 1 + trial % 4;
    std::vector<double> p(m), est(n * m);
    for (auto& x : p) x = u(gen);
    for (std::size_t e = 0; e < m; ++e) {
      // Redraw until the column's mean log-odds points the right way.
      std::vector<double> col(n);
      for (;;) {
        double sum = 0.0;
        for (auto& c : col) sum += (c = noise(gen));
        if (sign(sum) == sign(oracle::logit(p[e]))) break;
      }
      for (std::size_t j = 0; j < n; ++j) est[j * m + e] = from_log_odds(col[j]);
    }
    const EstimateMatrix matrix(n, m, est);
    const WeightVector w = panel_weights(matrix, WeightingMode::signed_log_odds);
    for (std::size_t e = 0; e < m; ++e) {
      std::vector<double> column(n);
      for (std::size_t j = 0; j < n; ++j) column[j] = matrix(j, e);
      REQUIRE((geometric_mean_odds(column) > 1.0) == (p[e] > 0.5));
      REQUIRE(sign(w[e]) == sign(oracle::logit(p[e])));
    }
  }
}

TEST_CASE("two experts: dictator or anti-dictator") {
  const RuleSignature dictator(2, {Outcome::zero, Outcome::one, Outcome::zero, Outcome::one});
  const RuleSignature anti(2, {Outcome::one, Outcome::one, Outcome::zero, Outcome::zero});
  // Denominators 201 and 202 keep p1 = 1 - p2 off the grid.
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const double p1 = 0.5 + 0.5 * (i + 1) / 201.0;
      const double p2 = 0.5 * (j + 1) / 202.0;
      const RuleSignature sig = rule_signature(optimal_weights(CompetenceVector({p1, p2})));
      REQUIRE(sig == (p1 >= 1.0 - p2 ? dictator : anti));
    }
  }
  // On the boundary the two experts cancel whenever they agree.
  const RuleSignature edge = rule_signature(optimal_weights(CompetenceVector({0.75, 0.25})));
  CHECK(edge[0] == Outcome::tie);
  CHECK(edge[3] == Outcome::tie);
}

TEST_CASE("find_optimality_threshold") {
  const ThresholdResult ex1 = find_optimality_threshold(kPanel);
  REQUIRE(ex1.threshold.has_value());
  CHECK(std::abs(*ex1.threshold - 0.962) <= 0.001);
  CHECK_FALSE(ex1.non_monotone);
  // Just below the threshold the judge's rule differs from the optimal one.
  const auto below = judge_weights(*ex1.threshold - 2 * kThresholdTolerance, kPanel, WeightingMode::signed_log_odds);
  CHECK_FALSE(rules_equivalent(below, optimal_weights(kPanel)));
  const auto at = judge_weights(*ex1.threshold, kPanel, WeightingMode::signed_log_odds);
  CHECK(rules_equivalent(at, optimal_weights(kPanel)));

  for (const auto& experts : {CompetenceVector({0.7, 0.7}), CompetenceVector({0.8})}) {
    const ThresholdResult r = find_optimality_threshold(experts);
    REQUIRE(r.threshold.has_value());
    CHECK(*r.threshold > 0.5);
    CHECK(*r.threshold <= 0.5 + kThresholdTolerance);
  }
  CHECK_THROWS_AS(find_optimality_threshold(CompetenceVector(std::vector<double>(23, 0.6))), CapabilityError);
}
