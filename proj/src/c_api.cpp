#include "mixmi/mixmi.h"

#include "mixmi/divergence.hpp"
#include "mixmi/error.hpp"
#include "mixmi/lower_bound.hpp"
#include "mixmi/mixture.hpp"
#include "mixmi/pe_bounds.hpp"
#include "mixmi/report.hpp"
#include "mixmi/scenarios.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

struct mixmi_mixture {
  mixmi::LabeledMixture model;
};

namespace {

thread_local std::string last_error;

mixmi_status to_status(mixmi::ErrorKind kind) {
  switch (kind) {
    case mixmi::ErrorKind::InvalidArgument: return MIXMI_ERR_INVALID_ARGUMENT;
    case mixmi::ErrorKind::Validation: return MIXMI_ERR_VALIDATION;
    case mixmi::ErrorKind::Parse: return MIXMI_ERR_PARSE;
    case mixmi::ErrorKind::Io: return MIXMI_ERR_IO;
    case mixmi::ErrorKind::Unsupported: return MIXMI_ERR_UNSUPPORTED;
    case mixmi::ErrorKind::Numerical: return MIXMI_ERR_NUMERICAL;
  }
  return MIXMI_ERR_INTERNAL;
}

template <class F>
mixmi_status guarded(F&& body) {
  try {
    body();
    return MIXMI_OK;
  } catch (const mixmi::Error& e) {
    last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MIXMI_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MIXMI_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return MIXMI_ERR_INTERNAL;
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw mixmi::Error(mixmi::ErrorKind::InvalidArgument, message);
}

mixmi::ReportOptions to_options(const mixmi_options* in) {
  require(in != nullptr, "options must not be null");
  mixmi::ReportOptions out;
  out.alpha = in->alpha;
  out.auto_lower_alpha = in->auto_lower_alpha != 0;
  switch (in->ub_mode) {
    case MIXMI_UB_AUTO: out.ub_mode = mixmi::UpperBoundMode::Auto; break;
    case MIXMI_UB_FULL: out.ub_mode = mixmi::UpperBoundMode::Full; break;
    case MIXMI_UB_MATCHED: out.ub_mode = mixmi::UpperBoundMode::Matched; break;
    default: require(false, "unknown upper-bound mode");
  }
  switch (in->oracle) {
    case MIXMI_ORACLE_NONE: out.oracle = mixmi::OracleKind::None; break;
    case MIXMI_ORACLE_MC: out.oracle = mixmi::OracleKind::MonteCarlo; break;
    case MIXMI_ORACLE_QUADRATURE: out.oracle = mixmi::OracleKind::Quadrature; break;
    default: require(false, "unknown oracle");
  }
  out.tol = in->tol;
  out.max_iter = in->max_iter;
  out.samples = in->samples;
  out.seed = in->seed;
  out.grid_points = in->grid_points;
  return out;
}

mixmi::ScenarioSpec to_spec(const mixmi_scenario_spec* in) {
  require(in != nullptr, "scenario spec must not be null");
  mixmi::ScenarioSpec out;
  require(in->scenario >= 1 && in->scenario <= 3, "scenario must be 1, 2 or 3");
  out.id = static_cast<mixmi::ScenarioId>(in->scenario);
  out.components_per_class = in->components_per_class;
  out.sigma = in->sigma;
  out.seed = in->seed;
  out.boundary_length = in->boundary_length;
  out.offset = in->offset;
  out.group_count = in->group_count;
  out.one_group_spread = in->one_group_spread;
  out.group_spread = in->group_spread;
  return out;
}

void from_spec(const mixmi::ScenarioSpec& in, mixmi_scenario_spec* out) {
  out->scenario = static_cast<mixmi_scenario_id>(in.id);
  out->components_per_class = in.components_per_class;
  out->sigma = in.sigma;
  out->seed = in.seed;
  out->boundary_length = in.boundary_length;
  out->offset = in.offset;
  out->group_count = in.group_count;
  out->one_group_spread = in.one_group_spread;
  out->group_spread = in.group_spread;
}

mixmi_report to_c_report(const mixmi::MiReport& r) {
  mixmi_report out{};
  out.h_c = r.h_c;
  out.i_lb_calpha = r.i_lb_calpha;
  out.i_ub_kl = r.i_ub_kl;
  out.i_hat_kl = r.i_hat_kl;
  out.i_hat_calpha = r.i_hat_calpha;
  out.i_hat_d = r.i_hat_d;
  out.i_lb_2h = r.i_lb_2h;
  out.i_ub_2h = r.i_ub_2h;
  out.ub_mode_used = r.ub_mode == mixmi::AssignmentMode::Full ? MIXMI_UB_FULL : MIXMI_UB_MATCHED;
  out.ub_iterations = r.ub_iterations;
  out.ub_converged = r.ub_converged ? 1 : 0;
  if (r.oracle) {
    out.has_oracle = 1;
    out.oracle_value = r.oracle->value;
    out.oracle_std_error = r.oracle->std_error;
    out.oracle_samples = r.oracle->samples_or_grid;
  }
  if (r.bayes_error) {
    out.has_bayes_error = 1;
    out.bayes_error = *r.bayes_error;
  }
  out.has_pe = r.has_pe ? 1 : 0;
  out.pe_fano = r.pe_fano;
  out.pe_hu = r.pe_hu;
  out.time_divergences_ms = r.timings.divergences_ms;
  out.time_estimators_ms = r.timings.estimators_ms;
  out.time_lower_bound_ms = r.timings.lower_bound_ms;
  out.time_upper_bound_ms = r.timings.upper_bound_ms;
  out.time_oracle_ms = r.timings.oracle_ms;
  return out;
}

mixmi::ClassMarginal to_marginal(const double* probs, size_t n) {
  require(probs != nullptr, "class probabilities must not be null");
  mixmi::ClassMarginal m;
  m.probs.assign(probs, probs + n);
  return m;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mixmi::Error(mixmi::ErrorKind::Io, "cannot write " + path);
  out << text;
  if (!out) throw mixmi::Error(mixmi::ErrorKind::Io, "failed writing " + path);
}

char* duplicate(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* mixmi_version(void) { return "0.1.0"; }

const char* mixmi_last_error(void) { return last_error.c_str(); }

const char* mixmi_status_string(mixmi_status status) {
  switch (status) {
    case MIXMI_OK: return "ok";
    case MIXMI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MIXMI_ERR_VALIDATION: return "validation error";
    case MIXMI_ERR_PARSE: return "parse error";
    case MIXMI_ERR_IO: return "i/o error";
    case MIXMI_ERR_UNSUPPORTED: return "unsupported";
    case MIXMI_ERR_NUMERICAL: return "numerical error";
    case MIXMI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

mixmi_status mixmi_mixture_from_json(const char* json_text, mixmi_mixture** out) {
  return guarded([&] {
    require(json_text != nullptr && out != nullptr, "arguments must not be null");
    *out = nullptr;
    *out = new mixmi_mixture{mixmi::load_mixture(json_text)};
  });
}

mixmi_status mixmi_mixture_from_file(const char* path, mixmi_mixture** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "arguments must not be null");
    *out = nullptr;
    *out = new mixmi_mixture{mixmi::load_mixture_file(path)};
  });
}

mixmi_status mixmi_mixture_to_json(const mixmi_mixture* mixture, char** out_json) {
  return guarded([&] {
    require(mixture != nullptr && out_json != nullptr, "arguments must not be null");
    *out_json = duplicate(mixmi::save_mixture(mixture->model));
  });
}

void mixmi_mixture_free(mixmi_mixture* mixture) { delete mixture; }

void mixmi_string_free(char* text) { std::free(text); }

size_t mixmi_mixture_num_components(const mixmi_mixture* mixture) {
  return mixture ? mixture->model.size() : 0;
}

size_t mixmi_mixture_dimension(const mixmi_mixture* mixture) {
  return mixture ? static_cast<size_t>(mixture->model.dim()) : 0;
}

size_t mixmi_mixture_num_classes(const mixmi_mixture* mixture) {
  return mixture ? static_cast<size_t>(mixture->model.num_classes()) : 0;
}

mixmi_status mixmi_mixture_class_probs(const mixmi_mixture* mixture, double* out, size_t len) {
  return guarded([&] {
    require(mixture != nullptr && out != nullptr, "arguments must not be null");
    const auto& probs = mixture->model.class_marginal().probs;
    require(len >= probs.size(), "output buffer shorter than the number of classes");
    std::copy(probs.begin(), probs.end(), out);
  });
}

mixmi_status mixmi_mixture_log_density(const mixmi_mixture* mixture, const double* x, size_t len, int label,
                                       double* out) {
  return guarded([&] {
    require(mixture != nullptr && x != nullptr && out != nullptr, "arguments must not be null");
    const Eigen::Map<const Eigen::VectorXd> point(x, static_cast<Eigen::Index>(len));
    *out = mixture->model.log_density(point, label >= 1 ? std::optional<int>(label) : std::nullopt);
  });
}

void mixmi_scenario_spec_default(mixmi_scenario_spec* spec) {
  if (spec) from_spec(mixmi::ScenarioSpec{}, spec);
}

mixmi_status mixmi_scenario_spec_from_json(const char* json_text, mixmi_scenario_spec* spec) {
  return guarded([&] {
    require(json_text != nullptr && spec != nullptr, "arguments must not be null");
    from_spec(mixmi::scenario_from_json(json_text), spec);
  });
}

mixmi_status mixmi_scenario_generate(const mixmi_scenario_spec* spec, mixmi_mixture** out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    *out = nullptr;
    *out = new mixmi_mixture{mixmi::generate(to_spec(spec))};
  });
}

mixmi_status mixmi_log_spaced(double lo, double hi, size_t n, double* out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    const auto values = mixmi::log_spaced(lo, hi, static_cast<int>(n));
    std::copy(values.begin(), values.end(), out);
  });
}

void mixmi_options_default(mixmi_options* options) {
  if (!options) return;
  const mixmi::ReportOptions d;
  options->alpha = d.alpha;
  options->auto_lower_alpha = 0;
  options->ub_mode = MIXMI_UB_AUTO;
  options->tol = d.tol;
  options->max_iter = d.max_iter;
  options->oracle = MIXMI_ORACLE_NONE;
  options->samples = d.samples;
  options->seed = d.seed;
  options->grid_points = d.grid_points;
}

mixmi_status mixmi_compute_report(const mixmi_mixture* mixture, const mixmi_options* options, mixmi_report* out) {
  return guarded([&] {
    require(mixture != nullptr && out != nullptr, "arguments must not be null");
    *out = to_c_report(mixmi::compute_report(mixture->model, to_options(options)));
  });
}

mixmi_status mixmi_lower_bound_alphas(const mixmi_mixture* mixture, const mixmi_options* options, double* out,
                                      size_t len) {
  return guarded([&] {
    require(mixture != nullptr && out != nullptr, "arguments must not be null");
    const mixmi::ReportOptions opts = to_options(options);
    require(len >= static_cast<size_t>(mixture->model.num_classes()), "output buffer too short");
    const auto result = opts.auto_lower_alpha ? mixmi::lower_bound_mi_auto(mixture->model)
                                              : mixmi::lower_bound_mi(mixture->model, opts.alpha);
    std::copy(result.alphas.begin(), result.alphas.end(), out);
  });
}

mixmi_status mixmi_sigma_sweep(const mixmi_scenario_spec* spec, const double* sigmas, size_t count,
                               const mixmi_options* options, mixmi_report* rows) {
  return guarded([&] {
    require(count == 0 || (sigmas != nullptr && rows != nullptr), "arguments must not be null");
    const auto reports = mixmi::sigma_sweep(to_spec(spec), std::span<const double>(sigmas, count),
                                            to_options(options));
    for (size_t r = 0; r < count; ++r) rows[r] = to_c_report(reports[r]);
  });
}

mixmi_status mixmi_binary_entropy(double x, double* out_bits) {
  return guarded([&] {
    require(out_bits != nullptr, "output must not be null");
    *out_bits = mixmi::binary_entropy(x);
  });
}

mixmi_status mixmi_inverse_binary_entropy(double h_bits, double* out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    *out = mixmi::inverse_binary_entropy(h_bits);
  });
}

mixmi_status mixmi_pe_fano_lower(double mi_nats, const double* class_probs, size_t num_classes, double* out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    *out = mixmi::fano_lower_pe(mi_nats, to_marginal(class_probs, num_classes));
  });
}

mixmi_status mixmi_pe_hu_upper(double mi_nats, const double* class_probs, size_t num_classes, double* out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    *out = mixmi::hu_upper_pe(mi_nats, to_marginal(class_probs, num_classes));
  });
}

mixmi_status mixmi_write_divergence_csv(const mixmi_mixture* mixture, double alpha, const char* prefix) {
  return guarded([&] {
    require(mixture != nullptr && prefix != nullptr, "arguments must not be null");
    const auto div = mixmi::pairwise_matrices(mixture->model, alpha);
    const std::string base(prefix);
    write_file(base + "kl.csv", mixmi::matrix_to_csv(div.kl));
    write_file(base + "chernoff.csv", mixmi::matrix_to_csv(div.chernoff));
    write_file(base + "combined.csv", mixmi::matrix_to_csv(div.combined));
  });
}

mixmi_status mixmi_write_upper_bound_csv(const mixmi_mixture* mixture, const mixmi_options* options,
                                         const char* phi_path, const char* trace_path) {
  return guarded([&] {
    require(mixture != nullptr, "mixture must not be null");
    const mixmi::ReportOptions opts = to_options(options);
    const auto div = mixmi::pairwise_matrices(mixture->model, opts.alpha);
    const auto result = mixmi::compute_upper_bound(mixture->model, div, opts);
    if (phi_path) {
      std::ostringstream out;
      out.imbue(std::locale::classic());
      out.precision(12);
      out << "batch,class,component,phi\n";
      const auto& a = result.assignment;
      for (std::size_t m = 0; m < a.num_batches(); ++m) {
        for (std::size_t c = 0; c < a.num_classes; ++c) {
          out << m << ',' << c + 1 << ',' << a.slot(m, c) << ','
              << a.phi(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) << '\n';
        }
      }
      write_file(phi_path, out.str());
    }
    if (trace_path) {
      std::ostringstream out;
      out.imbue(std::locale::classic());
      out.precision(12);
      out << "iteration,objective\n";
      for (std::size_t t = 0; t < result.objective_trace.size(); ++t) {
        out << t << ',' << result.objective_trace[t] << '\n';
      }
      write_file(trace_path, out.str());
    }
  });
}

}  // extern "C"
