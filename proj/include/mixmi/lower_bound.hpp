#pragma once

#include "mixmi/gaussian.hpp"
#include "mixmi/mixture.hpp"

#include <span>
#include <vector>

namespace mixmi {

struct LowerBoundResult {
  double value = 0.0;          // nats, >= 0
  std::vector<double> alphas;  // per class
  Matrix q_matrix;             // Q_cc' before the min(1, .) clamp
};

/// Search window and tolerance for the per-class alpha optimization.
struct AlphaSearch {
  double lo = 0.01;
  double hi = 0.99;
  double tol = 1e-4;
  int grid_points = 99;
};

/// ln Q_{c c'} for 1-based labels c, c2:
///   Q = sum_{i in c} sum_{j in c2} (w_i/P_c)^a (w_j/P_c2)^(1-a) e^{-C_a(pr_i || pr_j)}.
double log_q_value(const LabeledMixture& mixture, int c, int c2, double alpha);
double q_value(const LabeledMixture& mixture, int c, int c2, double alpha);

/// -sum_c P_c ln[ sum_c' P_c' min(1, Q_cc') ], with alphas[c] used for the
/// whole row c (0-based class index).
LowerBoundResult lower_bound_mi(const LabeledMixture& mixture, std::span<const double> alphas);

/// Same bound with one alpha for every class.
LowerBoundResult lower_bound_mi(const LabeledMixture& mixture, double alpha);

/// Chooses each alpha_c independently to minimize sum_c' P_c' min(1, Q_cc').
LowerBoundResult lower_bound_mi_auto(const LabeledMixture& mixture, const AlphaSearch& search = {});

}  // namespace mixmi
