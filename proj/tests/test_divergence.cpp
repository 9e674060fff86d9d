#include "doctest.h"

#include "mixmi/divergence.hpp"
#include "mixmi/error.hpp"
#include "test_support.hpp"

#include <cmath>
#include <sstream>

using namespace mixmi;
using mixmi::testing::iso;

TEST_CASE("KL closed form") {
  GaussianComponent a = iso({0.0}, 1.0);
  CHECK(kl_gaussian(a, a) == 0.0);
  CHECK(kl_gaussian(a, iso({2.0}, 1.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(kl_gaussian(a, iso({0.0}, 2.0)) == doctest::Approx(0.5 * (std::log(2.0) + 0.5 - 1.0)).epsilon(1e-14));
  CHECK(kl_gaussian(a, iso({0.0}, 2.0)) == doctest::Approx(0.0965735902799727).epsilon(1e-13));
  CHECK_THROWS_AS(kl_gaussian(a, iso({0.0, 0.0}, 1.0)), Error);
}

TEST_CASE("Chernoff closed form") {
  GaussianComponent a = iso({0.0}, 1.0), b = iso({2.0}, 1.0);
  for (double alpha : {0.1, 0.5, 0.9}) CHECK(chernoff_gaussian(a, a, alpha) == 0.0);
  CHECK(chernoff_gaussian(a, b, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(chernoff_gaussian(a, b, 0.0) == 0.0);
  CHECK(chernoff_gaussian(a, iso({7.0}, 3.0), 0.0) == 0.0);
  CHECK(chernoff_gaussian(a, iso({7.0}, 3.0), 1.0) == 0.0);
  CHECK_THROWS_AS(chernoff_gaussian(a, b, 1.5), Error);
  CHECK_THROWS_AS(chernoff_gaussian(a, b, -0.1), Error);
}

TEST_CASE("combined distance") {
  CHECK(combined_distance(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(combined_distance(2.0, 0.5) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(combined_distance(0.0, 0.5) == 0.0);
  CHECK(combined_distance(0.0, 0.0) == 0.0);
}

TEST_CASE("homoscedastic Chernoff at one half is a quarter of KL") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    int d = 1 + trial % 3;
    Matrix cov = testing::random_spd(rng, d == 3 ? 2 : d);
    if (d == 3) {
      Matrix big = Matrix::Identity(3, 3);
      big.topLeftCorner(2, 2) = cov;
      cov = big;
    }
    Vector m1(d), m2(d);
    for (int k = 0; k < d; ++k) {
      m1(k) = u(rng);
      m2(k) = u(rng);
    }
    GaussianComponent p(m1, cov), q(m2, cov);
    double kl = kl_gaussian(p, q);
    CHECK(chernoff_gaussian(p, q, 0.5) == doctest::Approx(kl / 4.0).epsilon(1e-10));
  }
}

TEST_CASE("Chernoff swap symmetry") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    GaussianComponent p(Vector::Random(2), testing::random_spd(rng, 2));
    GaussianComponent q(Vector::Random(2) * 2.0, testing::random_spd(rng, 2));
    double alpha = ua(rng);
    CHECK(chernoff_gaussian(p, q, alpha) == doctest::Approx(chernoff_gaussian(q, p, 1.0 - alpha)).epsilon(1e-10));
  }
}

TEST_CASE("Chernoff is concave in alpha") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    GaussianComponent p(Vector::Random(2), testing::random_spd(rng, 2));
    GaussianComponent q(Vector::Random(2) * 2.0, testing::random_spd(rng, 2));
    std::vector<double> v(101);
    for (int k = 0; k <= 100; ++k) v[k] = chernoff_gaussian(p, q, k / 100.0);
    for (int k = 1; k < 100; ++k) CHECK(v[k - 1] - 2.0 * v[k] + v[k + 1] <= 1e-9);
  }
}

TEST_CASE("closed forms agree with quadrature") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    int d = 1 + trial % 2;
    GaussianComponent p(Vector::Random(d), testing::random_spd(rng, d));
    GaussianComponent q(Vector::Random(d) * 1.5, testing::random_spd(rng, d));
    CHECK(std::abs(kl_gaussian(p, q) - testing::quadrature_kl(p, q)) < 1e-4);
    for (double alpha : {0.3, 0.5}) {
      CHECK(std::abs(chernoff_gaussian(p, q, alpha) - testing::quadrature_chernoff(p, q, alpha)) < 1e-4);
    }
  }
}

TEST_CASE("tiny covariances do not produce spurious negatives") {
  Matrix cov = 1e-6 * Matrix::Identity(2, 2);
  GaussianComponent p(Vector::Zero(2), cov), q(Vector::Constant(2, 1e-9), cov);
  CHECK(kl_gaussian(p, q) >= 0.0);
  CHECK(chernoff_gaussian(p, q, 0.5) >= 0.0);
}

TEST_CASE("pairwise matrices") {
  LabeledMixture one({iso({0.0}, 1.0)}, {1.0}, {1}, 1);
  DivergenceMatrices d1 = pairwise_matrices(one);
  CHECK(d1.kl.rows() == 1);
  CHECK(d1.kl(0, 0) == 0.0);
  CHECK(d1.chernoff(0, 0) == 0.0);
  CHECK(d1.combined(0, 0) == 0.0);

  DivergenceMatrices d2 = pairwise_matrices(testing::two_gauss_1d());
  Matrix kl(2, 2), ca(2, 2);
  kl << 0, 2, 2, 0;
  ca << 0, 0.5, 0.5, 0;
  CHECK((d2.kl - kl).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((d2.chernoff - ca).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(d2.combined(0, 1) == doctest::Approx(0.8).epsilon(1e-15));

  LabeledMixture m = testing::random_mixture(9, {.dim = 2});
  for (double alpha : {0.5, 0.3}) {
    DivergenceMatrices d = pairwise_matrices(m, alpha);
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        double k = kl_gaussian(m.component(i), m.component(j));
        double c = chernoff_gaussian(m.component(i), m.component(j), alpha);
        CHECK(d.kl(i, j) == k);
        CHECK(d.chernoff(i, j) == doctest::Approx(c).epsilon(1e-14));
        CHECK(d.combined(i, j) == doctest::Approx(combined_distance(k, c)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("zero-weight components are excluded from the matrices") {
  LabeledMixture m({iso({0.0}, 1.0), iso({5.0}, 1.0), iso({2.0}, 1.0)}, {0.5, 0.0, 0.5}, {1, 1, 2}, 2);
  DivergenceMatrices d = pairwise_matrices(m);
  CHECK(d.kl.row(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.kl.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.kl(0, 2) == doctest::Approx(2.0));
}

TEST_CASE("matrix CSV layout") {
  Matrix a(2, 2);
  a << 0.0, 0.5, 0.25, 0.0;
  std::string csv = matrix_to_csv(a);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "row,0,1");
  std::getline(in, line);
  CHECK(line == "0,0,0.5");
  std::getline(in, line);
  CHECK(line == "1,0.25,0");
}
