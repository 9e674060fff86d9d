#pragma once

#include "mixmi/divergence.hpp"
#include "mixmi/mixture.hpp"
#include "mixmi/oracles.hpp"
#include "mixmi/upper_bound.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mixmi {

enum class OracleKind { None, MonteCarlo, Quadrature };
enum class UpperBoundMode { Auto, Full, Matched };

struct ReportOptions {
  double alpha = kDefaultAlpha;
  bool auto_lower_alpha = false;  // search alpha_c per class for the lower bound
  UpperBoundMode ub_mode = UpperBoundMode::Auto;
  double tol = 1e-9;
  int max_iter = 500;
  OracleKind oracle = OracleKind::None;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  int grid_points = 401;
  std::size_t full_cap = kFullBatchCap;
};

struct StageTimings {
  double divergences_ms = 0.0;
  double estimators_ms = 0.0;
  double lower_bound_ms = 0.0;
  double upper_bound_ms = 0.0;
  double oracle_ms = 0.0;
};

/// Every bound and estimate for one mixture, in nats.
///
/// For binary problems pe_fano is Fano's bound evaluated at I_ub_KL and
/// pe_hu is the Hu bound evaluated at I_lb_Calpha, so both remain rigorous
/// bounds on the Bayes error.
struct MiReport {
  double h_c = 0.0;
  double i_lb_calpha = 0.0;
  double i_ub_kl = 0.0;
  double i_hat_kl = 0.0;
  double i_hat_calpha = 0.0;
  double i_hat_d = 0.0;
  double i_lb_2h = 0.0;
  double i_ub_2h = 0.0;

  std::vector<double> lb_alphas;
  AssignmentMode ub_mode = AssignmentMode::Full;
  int ub_iterations = 0;
  bool ub_converged = false;

  std::optional<OracleResult> oracle;
  OracleKind oracle_kind = OracleKind::None;
  std::optional<double> bayes_error;  // quadrature oracle only

  bool has_pe = false;
  double pe_fano = 0.0;
  double pe_hu = 0.0;

  StageTimings timings;
  ReportOptions config;
};

/// Builds the batch layout selected by options.ub_mode and minimizes the
/// variational upper bound from it.
UpperBoundResult compute_upper_bound(const LabeledMixture& mixture, const DivergenceMatrices& div,
                                     const ReportOptions& options);

/// Throws Error(Numerical) if I_lb_Calpha exceeds I_ub_KL by more than 1e-9.
MiReport compute_report(const LabeledMixture& mixture, const ReportOptions& options);

}  // namespace mixmi
