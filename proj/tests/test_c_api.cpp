#include "doctest.h"

#include "mixmi/mixmi.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const char* kFixture = R"({"num_classes": 2, "components": [
  {"weight": 0.5, "label": 1, "mean": [0.0], "cov": [[1.0]]},
  {"weight": 0.5, "label": 2, "mean": [2.0], "cov": [[1.0]]}]})";

struct Handle {
  mixmi_mixture* ptr = nullptr;
  ~Handle() { mixmi_mixture_free(ptr); }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("mixture handles") {
  Handle h;
  REQUIRE(mixmi_mixture_from_json(kFixture, &h.ptr) == MIXMI_OK);
  CHECK(mixmi_mixture_num_components(h.ptr) == 2);
  CHECK(mixmi_mixture_dimension(h.ptr) == 1);
  CHECK(mixmi_mixture_num_classes(h.ptr) == 2);

  double probs[2];
  CHECK(mixmi_mixture_class_probs(h.ptr, probs, 2) == MIXMI_OK);
  CHECK(probs[0] == 0.5);
  CHECK(mixmi_mixture_class_probs(h.ptr, probs, 1) == MIXMI_ERR_INVALID_ARGUMENT);

  double x = 0.0, out = 0.0;
  CHECK(mixmi_mixture_log_density(h.ptr, &x, 1, 1, &out) == MIXMI_OK);
  CHECK(out == doctest::Approx(std::log(0.5) - 0.5 * std::log(2.0 * M_PI)).epsilon(1e-14));
  CHECK(mixmi_mixture_log_density(h.ptr, &x, 2, 0, &out) == MIXMI_ERR_INVALID_ARGUMENT);
  CHECK(mixmi_mixture_log_density(h.ptr, &x, 1, 3, &out) != MIXMI_OK);

  char* json = nullptr;
  REQUIRE(mixmi_mixture_to_json(h.ptr, &json) == MIXMI_OK);
  Handle back;
  CHECK(mixmi_mixture_from_json(json, &back.ptr) == MIXMI_OK);
  mixmi_string_free(json);
}

TEST_CASE("errors map to status codes") {
  mixmi_mixture* m = nullptr;
  CHECK(mixmi_mixture_from_json("{", &m) == MIXMI_ERR_PARSE);
  CHECK(m == nullptr);
  CHECK(std::string(mixmi_last_error()).size() > 0);
  CHECK(mixmi_mixture_from_json(R"({"num_classes": 1, "components": [
      {"weight": 0.9, "label": 1, "mean": [0], "cov": [[1]]}]})", &m) == MIXMI_ERR_VALIDATION);
  CHECK(std::string(mixmi_last_error()).find("0.9") != std::string::npos);
  CHECK(mixmi_mixture_from_file("/nonexistent/mixture.json", &m) == MIXMI_ERR_IO);
  CHECK(mixmi_mixture_from_json(nullptr, &m) == MIXMI_ERR_INVALID_ARGUMENT);
  CHECK(std::string(mixmi_status_string(MIXMI_ERR_NUMERICAL)).size() > 0);
  CHECK(std::string(mixmi_version()) == "0.1.0");
}

TEST_CASE("report through the C interface") {
  Handle h;
  REQUIRE(mixmi_mixture_from_json(kFixture, &h.ptr) == MIXMI_OK);
  mixmi_options opt;
  mixmi_options_default(&opt);
  CHECK(opt.alpha == 0.5);
  CHECK(opt.ub_mode == MIXMI_UB_AUTO);
  CHECK(opt.samples == 100000);
  opt.oracle = MIXMI_ORACLE_QUADRATURE;
  mixmi_report r;
  REQUIRE(mixmi_compute_report(h.ptr, &opt, &r) == MIXMI_OK);
  CHECK(r.i_hat_kl == doctest::Approx(0.5662191695169727).epsilon(1e-12));
  CHECK(r.i_hat_calpha == doctest::Approx(0.2190701963798386).epsilon(1e-12));
  CHECK(r.i_hat_d == doctest::Approx(0.3220465146121676).epsilon(1e-12));
  CHECK(r.has_oracle);
  CHECK(r.oracle_value == doctest::Approx(0.33683082034683165).epsilon(1e-9));
  CHECK(r.has_bayes_error);
  CHECK(r.has_pe);
  CHECK(r.ub_mode_used == MIXMI_UB_FULL);

  double alphas[2];
  opt.auto_lower_alpha = 1;
  CHECK(mixmi_lower_bound_alphas(h.ptr, &opt, alphas, 2) == MIXMI_OK);
  CHECK(alphas[0] == doctest::Approx(0.5).epsilon(1e-2));

  opt.alpha = 2.0;
  CHECK(mixmi_compute_report(h.ptr, &opt, &r) == MIXMI_ERR_INVALID_ARGUMENT);
}

TEST_CASE("scenarios and sweeps through the C interface") {
  mixmi_scenario_spec spec;
  mixmi_scenario_spec_default(&spec);
  CHECK(spec.scenario == MIXMI_SCENARIO_UNIFORM_BOUNDARY);
  CHECK(spec.components_per_class == 20);
  REQUIRE(mixmi_scenario_spec_from_json(R"({"components_per_class": 5, "scenario": 3})", &spec) == MIXMI_OK);
  CHECK(spec.components_per_class == 5);
  CHECK(spec.scenario == MIXMI_SCENARIO_MULTI_GROUP);
  CHECK(mixmi_scenario_spec_from_json(R"({"bogus": 1})", &spec) == MIXMI_ERR_PARSE);

  Handle h;
  REQUIRE(mixmi_scenario_generate(&spec, &h.ptr) == MIXMI_OK);
  CHECK(mixmi_mixture_num_components(h.ptr) == 10);

  double sigmas[3];
  REQUIRE(mixmi_log_spaced(0.1, 10.0, 3, sigmas) == MIXMI_OK);
  CHECK(sigmas[1] == doctest::Approx(1.0).epsilon(1e-12));

  mixmi_options opt;
  mixmi_options_default(&opt);
  opt.oracle = MIXMI_ORACLE_MC;
  opt.samples = 5000;
  mixmi_report rows[3], again[3];
  REQUIRE(mixmi_sigma_sweep(&spec, sigmas, 3, &opt, rows) == MIXMI_OK);
  REQUIRE(mixmi_sigma_sweep(&spec, sigmas, 3, &opt, again) == MIXMI_OK);
  for (int k = 0; k < 3; ++k) {
    CHECK(rows[k].i_lb_calpha <= rows[k].i_ub_kl + 1e-9);
    CHECK(rows[k].oracle_value == again[k].oracle_value);
  }
  double bad = -1.0;
  CHECK(mixmi_sigma_sweep(&spec, &bad, 1, &opt, rows) == MIXMI_ERR_INVALID_ARGUMENT);
}

TEST_CASE("error probability helpers") {
  double v = 0.0;
  CHECK(mixmi_binary_entropy(0.25, &v) == MIXMI_OK);
  CHECK(v == doctest::Approx(0.8112781244591328).epsilon(1e-14));
  CHECK(mixmi_inverse_binary_entropy(0.5, &v) == MIXMI_OK);
  CHECK(v == doctest::Approx(0.11002786443835956).epsilon(1e-10));
  double half[2] = {0.5, 0.5};
  CHECK(mixmi_pe_hu_upper(0.0, half, 2, &v) == MIXMI_OK);
  CHECK(v == doctest::Approx(0.5));
  CHECK(mixmi_pe_fano_lower(std::log(2.0), half, 2, &v) == MIXMI_OK);
  CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  double three[3] = {0.2, 0.3, 0.5};
  CHECK(mixmi_pe_hu_upper(0.1, three, 3, &v) == MIXMI_ERR_UNSUPPORTED);
}

TEST_CASE("debug dumps") {
  Handle h;
  REQUIRE(mixmi_mixture_from_json(kFixture, &h.ptr) == MIXMI_OK);
  auto dir = std::filesystem::temp_directory_path() / "mixmi_capi_dump";
  std::filesystem::create_directories(dir);
  std::string prefix = (dir / "d_").string();
  REQUIRE(mixmi_write_divergence_csv(h.ptr, 0.5, prefix.c_str()) == MIXMI_OK);
  CHECK(slurp(dir / "d_kl.csv") == "row,0,1\n0,0,2\n1,2,0\n");
  CHECK(std::filesystem::exists(dir / "d_chernoff.csv"));
  CHECK(std::filesystem::exists(dir / "d_combined.csv"));

  mixmi_options opt;
  mixmi_options_default(&opt);
  std::string phi = (dir / "phi.csv").string(), trace = (dir / "trace.csv").string();
  REQUIRE(mixmi_write_upper_bound_csv(h.ptr, &opt, phi.c_str(), trace.c_str()) == MIXMI_OK);
  CHECK(slurp(phi).rfind("batch,class,component,phi\n", 0) == 0);
  CHECK(slurp(trace).rfind("iteration,objective\n", 0) == 0);
  CHECK(mixmi_write_divergence_csv(h.ptr, 0.5, "/nonexistent/dir/x_") == MIXMI_ERR_IO);
  std::filesystem::remove_all(dir);
}
