#include "doctest.h"

#include "mixmi/error.hpp"
#include "mixmi/estimators.hpp"
#include "mixmi/lower_bound.hpp"
#include "mixmi/oracles.hpp"
#include "test_support.hpp"

#include <cmath>
#include <cstdlib>

using namespace mixmi;
using mixmi::testing::iso;
using mixmi::testing::kLn2;

TEST_CASE("quadrature reference for the binary fixture") {
  LabeledMixture m = testing::two_gauss_1d();
  OracleResult q = quadrature_mutual_information(m, 401);
  CHECK(q.value == doctest::Approx(0.33683082034683165).epsilon(1e-9));
  CHECK(q.std_error == 0.0);
  CHECK(q.samples_or_grid == 401);
  CHECK(std::abs(quadrature_mutual_information(m, 801).value - q.value) < 1e-6);
  // The integrand has a kink at the decision boundary, so the error is O(h^2) here.
  CHECK(std::abs(quadrature_bayes_error(m, 401) - 0.15865525393145707) < 1e-4);
  CHECK(std::abs(quadrature_bayes_error(m, 4001) - 0.15865525393145707) < 1e-6);
}

TEST_CASE("quadrature limits") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    LabeledMixture same = testing::identical_components(testing::random_mixture(seed));
    CHECK(std::abs(quadrature_mutual_information(same, 201).value) < 1e-8);
  }
  LabeledMixture far({iso({-50.0}, 1.0), iso({50.0}, 1.0)}, {0.5, 0.5}, {1, 2}, 2);
  CHECK(quadrature_mutual_information(far, 401).value == doctest::Approx(kLn2).epsilon(1e-6));
  CHECK(quadrature_bayes_error(far, 401) < 1e-12);

  LabeledMixture three_d({iso({0, 0, 0}, 1.0), iso({1, 0, 0}, 1.0)}, {0.5, 0.5}, {1, 2}, 2);
  CHECK_THROWS_AS(quadrature_mutual_information(three_d, 101), Error);
}

TEST_CASE("quadrature converges under grid refinement") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    LabeledMixture m = testing::random_mixture(seed);
    int n = m.dim() == 1 ? 801 : 201;
    double coarse = quadrature_mutual_information(m, n).value;
    double fine = quadrature_mutual_information(m, 2 * n - 1).value;
    CHECK(std::abs(fine - coarse) < 1e-6);
  }
}

TEST_CASE("Monte Carlo edge cases") {
  LabeledMixture single({iso({0.0}, 1.0), iso({2.0}, 3.0)}, {0.3, 0.7}, {1, 1}, 1);
  OracleResult s = mc_mutual_information(single, 10000, 1);
  CHECK(std::abs(s.value) < 1e-12);
  CHECK(s.std_error < 1e-12);

  LabeledMixture same = testing::identical_components(testing::random_mixture(4));
  OracleResult z = mc_mutual_information(same, 20000, 2);
  CHECK(std::abs(z.value) <= 3.0 * z.std_error + 1e-12);

  CHECK_THROWS_AS(mc_mutual_information(single, 0, 1), Error);
}

TEST_CASE("Monte Carlo on the binary fixture") {
  LabeledMixture m = testing::two_gauss_1d();
  OracleResult mc = mc_mutual_information(m, 1000000, 12345);
  CHECK(mc.samples_or_grid == 1000000);
  CHECK(mc.seed == 12345);
  CHECK(mc.value > lower_bound_mi(m, 0.5).value);
  CHECK(mc.value < kLn2 - std::log1p(std::exp(-2.0)));
  double q = quadrature_mutual_information(m, 401).value;
  CHECK(std::abs(mc.value - q) <= 3.0 * mc.std_error);
}

TEST_CASE("Monte Carlo agrees with quadrature on random mixtures") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    LabeledMixture m = testing::random_mixture(seed);
    OracleResult mc = mc_mutual_information(m, 200000, seed);
    double q = quadrature_mutual_information(m, m.dim() == 1 ? 2001 : 301).value;
    CHECK(std::abs(mc.value - q) <= 3.0 * mc.std_error);
    CHECK(mc.value >= -3.0 * mc.std_error);
    CHECK(mc.value <= label_entropy(m.class_marginal()) + 3.0 * mc.std_error);
  }
}

TEST_CASE("Monte Carlo is reproducible and independent of the worker count") {
  LabeledMixture m = testing::random_mixture(17, {.num_classes = 3});
  OracleResult a = mc_mutual_information(m, 100000, 7);
  OracleResult b = mc_mutual_information(m, 100000, 7);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);

  const char* saved = std::getenv("MIXMI_THREADS");
  std::string previous = saved ? saved : "";
  for (const char* workers : {"1", "3", "8"}) {
    setenv("MIXMI_THREADS", workers, 1);
    OracleResult c = mc_mutual_information(m, 100000, 7);
    CHECK(c.value == a.value);
    CHECK(c.std_error == a.std_error);
    CHECK(quadrature_mutual_information(m, 101).value == quadrature_mutual_information(m, 101).value);
  }
  if (saved) setenv("MIXMI_THREADS", previous.c_str(), 1);
  else unsetenv("MIXMI_THREADS");

  OracleResult other = mc_mutual_information(m, 100000, 8);
  CHECK(other.value != a.value);
}

TEST_CASE("zero-weight components are never sampled") {
  LabeledMixture base = testing::two_gauss_1d();
  LabeledMixture padded({iso({0.0}, 1.0), iso({40.0}, 1.0), iso({2.0}, 1.0)}, {0.5, 0.0, 0.5}, {1, 1, 2}, 2);
  CHECK(quadrature_mutual_information(padded, 401).value ==
        doctest::Approx(quadrature_mutual_information(base, 401).value).epsilon(1e-6));
  OracleResult mc = mc_mutual_information(padded, 100000, 3);
  CHECK(std::abs(mc.value - 0.33683082034683165) <= 3.0 * mc.std_error);
}
