#include "mixmi/report.hpp"

#include "mixmi/entropy_bounds.hpp"
#include "mixmi/error.hpp"
#include "mixmi/estimators.hpp"
#include "mixmi/lower_bound.hpp"
#include "mixmi/pe_bounds.hpp"

#include <chrono>
#include <sstream>

namespace mixmi {

namespace {

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

UpperBoundResult compute_upper_bound(const LabeledMixture& mixture, const DivergenceMatrices& div,
                                     const ReportOptions& options) {
  AssignmentMode mode = AssignmentMode::Full;
  switch (options.ub_mode) {
    case UpperBoundMode::Auto: mode = auto_assignment_mode(mixture); break;
    case UpperBoundMode::Full: mode = AssignmentMode::Full; break;
    case UpperBoundMode::Matched: mode = AssignmentMode::Matched; break;
  }
  const VariationalAssignment start = mode == AssignmentMode::Full
                                          ? build_batches_full(mixture, options.full_cap)
                                          : build_batches_matched(mixture, div);
  return minimize_upper_bound(mixture, start, div, {options.tol, options.max_iter});
}

MiReport compute_report(const LabeledMixture& mixture, const ReportOptions& options) {
  MiReport report;
  report.config = options;
  report.h_c = label_entropy(mixture.class_marginal());
  Stopwatch clock;

  const DivergenceMatrices div = pairwise_matrices(mixture, options.alpha);
  report.timings.divergences_ms = clock.lap_ms();

  report.i_hat_kl = estimate_mi(mixture, div, EstimatorMethod::KL).value;
  report.i_hat_calpha = estimate_mi(mixture, div, EstimatorMethod::Chernoff).value;
  report.i_hat_d = estimate_mi(mixture, div, EstimatorMethod::Combined).value;
  const BaselineBounds baseline = baseline_bounds(mixture, div);
  report.i_lb_2h = baseline.lower;
  report.i_ub_2h = baseline.upper;
  report.timings.estimators_ms = clock.lap_ms();

  const LowerBoundResult lower =
      options.auto_lower_alpha ? lower_bound_mi_auto(mixture) : lower_bound_mi(mixture, options.alpha);
  report.i_lb_calpha = lower.value;
  report.lb_alphas = lower.alphas;
  report.timings.lower_bound_ms = clock.lap_ms();

  const UpperBoundResult upper = compute_upper_bound(mixture, div, options);
  report.i_ub_kl = upper.value;
  report.ub_mode = upper.assignment.mode;
  report.ub_iterations = upper.iterations;
  report.ub_converged = upper.converged;
  report.timings.upper_bound_ms = clock.lap_ms();

  report.oracle_kind = options.oracle;
  if (options.oracle == OracleKind::MonteCarlo) {
    report.oracle = mc_mutual_information(mixture, options.samples, options.seed);
  } else if (options.oracle == OracleKind::Quadrature) {
    report.oracle = quadrature_mutual_information(mixture, options.grid_points);
    report.bayes_error = quadrature_bayes_error(mixture, options.grid_points);
  }
  report.timings.oracle_ms = clock.lap_ms();

  if (mixture.num_classes() == 2) {
    report.has_pe = true;
    report.pe_fano = fano_lower_pe(report.i_ub_kl, mixture.class_marginal());
    report.pe_hu = hu_upper_pe(report.i_lb_calpha, mixture.class_marginal());
  }

  if (report.i_lb_calpha > report.i_ub_kl + 1e-9) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lower bound " << report.i_lb_calpha << " exceeds upper bound " << report.i_ub_kl;
    throw Error(ErrorKind::Numerical, msg.str());
  }
  return report;
}

}  // namespace mixmi
