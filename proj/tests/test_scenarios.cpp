#include "doctest.h"

#include "mixmi/error.hpp"
#include "mixmi/report.hpp"
#include "mixmi/scenarios.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace mixmi;
using mixmi::testing::kLn2;

TEST_CASE("uniform boundary geometry") {
  ScenarioSpec spec;
  spec.components_per_class = 100;
  spec.sigma = 0.5;
  LabeledMixture m = generate(spec);
  CHECK(m.size() == 200);
  CHECK(m.dim() == 2);
  CHECK(m.num_classes() == 2);
  CHECK(m.class_marginal().probs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.class_marginal().probs[1] == doctest::Approx(0.5).epsilon(1e-12));
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m.weight(i) == 1.0 / 200.0);
    CHECK((m.component(i).cov() - 0.25 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.component(i).mean()(0) == (m.label(i) == 1 ? -0.5 : 0.5));
  }
  CHECK(m.component(0).mean()(1) == 0.0);
  CHECK(m.component(99).mean()(1) == 10.0);
}

TEST_CASE("every scenario is balanced and reproducible") {
  for (ScenarioId id : {ScenarioId::UniformBoundary, ScenarioId::OneGroup, ScenarioId::MultiGroup}) {
    ScenarioSpec spec;
    spec.id = id;
    spec.components_per_class = 13;
    spec.seed = 99;
    LabeledMixture a = generate(spec), b = generate(spec);
    CHECK(a.class_marginal().probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(save_mixture(a) == save_mixture(b));
    spec.seed = 100;
    if (id != ScenarioId::UniformBoundary) CHECK(save_mixture(generate(spec)) != save_mixture(a));
  }
}

TEST_CASE("spec validation and JSON") {
  ScenarioSpec bad;
  bad.sigma = 0.0;
  CHECK_THROWS_AS(generate(bad), Error);
  bad.sigma = 1.0;
  bad.components_per_class = 0;
  CHECK_THROWS_AS(generate(bad), Error);

  ScenarioSpec s = scenario_from_json(R"({"scenario": "multi_group", "components_per_class": 7, "sigma": 0.2,
                                          "seed": 4, "group_count": 3})");
  CHECK(s.id == ScenarioId::MultiGroup);
  CHECK(s.components_per_class == 7);
  CHECK(s.sigma == 0.2);
  CHECK(s.seed == 4);
  CHECK(s.group_count == 3);
  CHECK(s.offset == 0.5);
  CHECK(scenario_from_json(R"({"scenario": 2})").id == ScenarioId::OneGroup);
  CHECK_THROWS_AS(scenario_from_json(R"({"scenario": 4})"), Error);
  CHECK_THROWS_AS(scenario_from_json(R"({"sigmaa": 1})"), Error);
  CHECK_THROWS_AS(scenario_from_json(R"({"sigma": -1})"), Error);
  CHECK_THROWS_AS(scenario_from_json("{"), Error);
}

TEST_CASE("log spacing") {
  std::vector<double> v = log_spaced(0.01, 10.0, 30);
  REQUIRE(v.size() == 30);
  CHECK(v.front() == 0.01);
  CHECK(v.back() == 10.0);
  for (std::size_t k = 1; k < v.size(); ++k) {
    CHECK(std::log(v[k] / v[k - 1]) == doctest::Approx(std::log(1000.0) / 29.0).epsilon(1e-12));
  }
  CHECK(log_spaced(2.0, 5.0, 1) == std::vector<double>{2.0});
  CHECK_THROWS_AS(log_spaced(0.0, 1.0, 3), Error);
}

TEST_CASE("tiny sigma drives everything to the label entropy") {
  ScenarioSpec spec;
  spec.components_per_class = 10;
  ReportOptions opt;
  opt.oracle = OracleKind::MonteCarlo;
  opt.samples = 20000;
  std::vector<double> sigmas{0.001};
  MiReport r = sigma_sweep(spec, sigmas, opt).front();
  for (double v : {r.i_lb_calpha, r.i_ub_kl, r.i_hat_kl, r.i_hat_calpha, r.i_hat_d, r.oracle->value}) {
    CHECK(std::abs(v - kLn2) < 1e-3);
  }
}

TEST_CASE("huge sigma drives the oracle to zero") {
  ScenarioSpec spec;
  spec.components_per_class = 10;
  ReportOptions opt;
  opt.oracle = OracleKind::MonteCarlo;
  opt.samples = 50000;
  std::vector<double> sigmas{1000.0};
  MiReport r = sigma_sweep(spec, sigmas, opt).front();
  CHECK(std::abs(r.oracle->value) <= 3.0 * r.oracle->std_error + 1e-12);
  CHECK(r.i_lb_calpha <= r.i_ub_kl + 1e-9);
}

TEST_CASE("a one-row sweep equals a direct report") {
  ScenarioSpec spec;
  spec.id = ScenarioId::OneGroup;
  spec.components_per_class = 6;
  spec.sigma = 0.7;
  ReportOptions opt;
  opt.oracle = OracleKind::MonteCarlo;
  opt.samples = 10000;
  std::vector<double> sigmas{0.7};
  MiReport a = sigma_sweep(spec, sigmas, opt).front();
  MiReport b = compute_report(generate(spec), opt);
  CHECK(a.i_lb_calpha == b.i_lb_calpha);
  CHECK(a.i_ub_kl == b.i_ub_kl);
  CHECK(a.i_hat_d == b.i_hat_d);
  CHECK(a.i_lb_2h == b.i_lb_2h);
  CHECK(a.oracle->value == b.oracle->value);
  CHECK(a.pe_hu == b.pe_hu);
}

TEST_CASE("sweep rows are reproducible") {
  ScenarioSpec spec;
  spec.id = ScenarioId::MultiGroup;
  spec.components_per_class = 8;
  ReportOptions opt;
  opt.oracle = OracleKind::MonteCarlo;
  opt.samples = 5000;
  std::vector<double> sigmas = log_spaced(0.05, 5.0, 5);
  auto a = sigma_sweep(spec, sigmas, opt);
  auto b = sigma_sweep(spec, sigmas, opt);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].i_ub_kl == b[k].i_ub_kl);
    CHECK(a[k].oracle->value == b[k].oracle->value);
    for (double v : {a[k].i_lb_calpha, a[k].i_ub_kl, a[k].i_hat_kl, a[k].i_hat_calpha, a[k].i_hat_d}) {
      CHECK(v >= 0.0);
      CHECK(v <= kLn2 + 1e-12);
    }
  }
}

TEST_CASE("report on the binary fixture") {
  ReportOptions opt;
  opt.oracle = OracleKind::Quadrature;
  MiReport r = compute_report(testing::two_gauss_1d(), opt);
  CHECK(r.h_c == doctest::Approx(kLn2).epsilon(1e-15));
  CHECK(r.i_hat_kl == doctest::Approx(kLn2 - std::log1p(std::exp(-2.0))).epsilon(1e-12));
  CHECK(r.i_hat_calpha == doctest::Approx(kLn2 - std::log1p(std::exp(-0.5))).epsilon(1e-12));
  CHECK(r.i_lb_calpha == doctest::Approx(r.i_hat_calpha).epsilon(1e-12));
  CHECK(r.i_ub_kl == doctest::Approx(r.i_hat_kl).epsilon(1e-12));
  REQUIRE(r.oracle.has_value());
  CHECK(r.i_lb_calpha < r.oracle->value);
  CHECK(r.oracle->value < r.i_ub_kl);
  REQUIRE(r.bayes_error.has_value());
  CHECK(r.has_pe);
  CHECK(r.pe_hu >= *r.bayes_error);
  CHECK(r.pe_fano <= *r.bayes_error);
  CHECK(r.ub_mode == AssignmentMode::Full);

  ReportOptions matched;
  matched.ub_mode = UpperBoundMode::Matched;
  CHECK(compute_report(testing::two_gauss_1d(), matched).ub_mode == AssignmentMode::Matched);

  ReportOptions none;
  MiReport plain = compute_report(testing::random_mixture(2, {.num_classes = 3}), none);
  CHECK(!plain.oracle.has_value());
  CHECK(!plain.has_pe);
}
