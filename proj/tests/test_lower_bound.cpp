#include "doctest.h"

#include "mixmi/error.hpp"
#include "mixmi/estimators.hpp"
#include "mixmi/lower_bound.hpp"
#include "mixmi/oracles.hpp"
#include "mixmi/scenarios.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace mixmi;
using mixmi::testing::iso;
using mixmi::testing::kLn2;

TEST_CASE("Q values") {
  LabeledMixture m = testing::two_gauss_1d();
  CHECK(q_value(m, 1, 1, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q_value(m, 1, 2, 0.5) == doctest::Approx(0.6065306597126334).epsilon(1e-14));
  CHECK(log_q_value(m, 2, 1, 0.5) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK_THROWS_AS(q_value(m, 0, 1, 0.5), Error);
  CHECK_THROWS_AS(q_value(m, 1, 3, 0.5), Error);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    LabeledMixture r = testing::random_mixture(seed);
    for (int c = 1; c <= r.num_classes(); ++c) {
      for (double alpha : {0.2, 0.5, 0.8}) CHECK(q_value(r, c, c, alpha) >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("lower bound on the binary fixture") {
  LowerBoundResult r = lower_bound_mi(testing::two_gauss_1d(), 0.5);
  CHECK(r.value == doctest::Approx(kLn2 - std::log1p(std::exp(-0.5))).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.2190701963798386).epsilon(1e-12));
  CHECK(r.alphas == std::vector<double>{0.5, 0.5});
  CHECK(r.q_matrix(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("identically distributed classes give zero") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    LabeledMixture m = testing::identical_components(testing::random_mixture(seed));
    CHECK(lower_bound_mi(m, 0.5).value == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("single component per class matches the Chernoff estimator") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    testing::RandomMixtureOptions opt;
    opt.min_per_class = opt.max_per_class = 1;
    opt.num_classes = 2 + static_cast<int>(seed % 4);
    LabeledMixture m = testing::random_mixture(seed, opt);
    for (double alpha : {0.5, 0.3}) {
      double hat = estimate_mi(m, pairwise_matrices(m, alpha), EstimatorMethod::Chernoff).value;
      CHECK(std::abs(lower_bound_mi(m, alpha).value - hat) < 1e-12);
    }
  }
}

TEST_CASE("the clamp only tightens the bound") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    LabeledMixture m = testing::random_mixture(seed, {.num_classes = 3});
    LowerBoundResult r = lower_bound_mi(m, 0.5);
    const auto& p = m.class_marginal().probs;
    double unclamped = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
      double s = 0.0;
      for (std::size_t c2 = 0; c2 < p.size(); ++c2) s += p[c2] * r.q_matrix(c, c2);
      unclamped -= p[c] * std::log(s);
    }
    CHECK(r.value >= unclamped - 1e-12);
  }
}

TEST_CASE("lower bound never exceeds the quadrature oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    LabeledMixture m = testing::random_mixture(seed);
    double truth = quadrature_mutual_information(m, m.dim() == 1 ? 2001 : 301).value;
    CHECK(lower_bound_mi(m, 0.5).value <= truth + 1e-4);
    CHECK(lower_bound_mi_auto(m).value <= truth + 1e-4);
  }
}

TEST_CASE("lower bound never exceeds the Monte Carlo oracle") {
  for (std::uint64_t seed = 21; seed <= 26; ++seed) {
    LabeledMixture m = testing::random_mixture(seed, {.num_classes = 3});
    OracleResult mc = mc_mutual_information(m, 200000, seed);
    CHECK(lower_bound_mi_auto(m).value <= mc.value + 3.0 * mc.std_error);
  }
}

TEST_CASE("automatic alpha on symmetric homoscedastic mixtures stays at one half") {
  LowerBoundResult r = lower_bound_mi_auto(testing::two_gauss_1d());
  CHECK(r.alphas[0] == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(r.alphas[1] == doctest::Approx(0.5).epsilon(1e-2));

  for (double sigma : {0.05, 0.3, 1.0, 3.0}) {
    ScenarioSpec spec;
    spec.components_per_class = 8;
    spec.sigma = sigma;
    LowerBoundResult s = lower_bound_mi_auto(generate(spec));
    for (double a : s.alphas) CHECK(std::abs(a - 0.5) <= 0.01);
  }
}

TEST_CASE("automatic alpha is a local optimum on the grid") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    LabeledMixture m = testing::random_mixture(seed);
    LowerBoundResult best = lower_bound_mi_auto(m);
    CHECK(best.value >= lower_bound_mi(m, 0.5).value - 1e-12);
    for (std::size_t c = 0; c < best.alphas.size(); ++c) {
      for (double step : {-0.01, 0.01}) {
        std::vector<double> alphas = best.alphas;
        alphas[c] = std::clamp(alphas[c] + step, 0.01, 0.99);
        CHECK(lower_bound_mi(m, alphas).value <= best.value + 1e-12);
      }
    }
  }
}

TEST_CASE("argument checks") {
  LabeledMixture m = testing::two_gauss_1d();
  CHECK_THROWS_AS(lower_bound_mi(m, 1.2), Error);
  CHECK_THROWS_AS(lower_bound_mi(m, std::vector<double>{0.5}), Error);
  CHECK_THROWS_AS(lower_bound_mi_auto(m, {.lo = 0.0, .hi = 1.0}), Error);
  CHECK(lower_bound_mi(m, 0.0).value == doctest::Approx(0.0).epsilon(1e-15));
}
