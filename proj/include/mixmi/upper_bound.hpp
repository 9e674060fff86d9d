#pragma once

#include "mixmi/divergence.hpp"
#include "mixmi/mixture.hpp"

#include <cstddef>
#include <vector>

namespace mixmi {

enum class AssignmentMode { Full, Matched };

inline constexpr std::size_t kFullBatchCap = 1'000'000;
/// Above this many component combinations the automatic mode picks MATCHED.
inline constexpr std::size_t kAutoMatchedThreshold = 10'000;
/// Floor applied to phi before taking logarithms.
inline constexpr double kPhiFloor = 1e-300;

/// Mini-batch layout of the variational upper bound. Batch m holds one slot
/// per class; slot(m, c) is the component index or -1 for a padding slot
/// (always phi = 0). phi(m, c) is the share of that component's weight
/// assigned to the batch.
struct VariationalAssignment {
  std::size_t num_classes = 0;
  std::vector<std::ptrdiff_t> slots;  // row-major M x num_classes
  Matrix phi;                         // M x num_classes
  AssignmentMode mode = AssignmentMode::Full;

  std::size_t num_batches() const { return num_classes == 0 ? 0 : slots.size() / num_classes; }
  std::ptrdiff_t slot(std::size_t m, std::size_t c) const { return slots[m * num_classes + c]; }

  /// Largest |sum_{m : slot(m,c) = i} phi(m,c) - w_i| over active components,
  /// or +inf when a slot has negative phi or a padding slot carries weight.
  double constraint_violation(const LabeledMixture& mixture) const;
};

struct UpperBoundOptions {
  double tol = 1e-9;
  int max_iter = 500;
};

struct UpperBoundResult {
  double value = 0.0;                  // nats
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace; // initial value first, non-increasing
  VariationalAssignment assignment;    // final phi
};

/// Every combination of one active component per class, with proportional
/// phi_{m,c} = w_i prod_{c' != c} w_{j(m,c')} / P_c'. Throws past `cap`.
VariationalAssignment build_batches_full(const LabeledMixture& mixture,
                                         std::size_t cap = kFullBatchCap);

/// One-to-one matching of components across classes (minimum symmetric KL),
/// each class c > 1 matched against class 1. max_c N_c batches.
VariationalAssignment build_batches_matched(const LabeledMixture& mixture,
                                            const DivergenceMatrices& div);

/// FULL when prod_c N_c <= kAutoMatchedThreshold, MATCHED otherwise.
AssignmentMode auto_assignment_mode(const LabeledMixture& mixture);

/// Objective, gradient and Hessian of the variational bound for a fixed
/// batch layout. E(m, c, c') = exp(-KL(pr_{m,c} || pr_{m,c'})) is cached per
/// batch; phi is supplied per call so the optimizer and tests can probe
/// arbitrary points.
class UpperBoundProblem {
 public:
  UpperBoundProblem(const LabeledMixture& mixture, const VariationalAssignment& assignment,
                    const Matrix& kl);

  std::size_t num_batches() const { return num_batches_; }
  std::size_t num_classes() const { return num_classes_; }
  double label_entropy() const { return h_c_; }

  /// I_ub = H(C) - sum_m F_m(phi).
  double objective(const Matrix& phi) const;
  /// F_m = sum_c phi_{m,c} ln(S_{m,c} / phi_{m,c}); zero-phi terms vanish.
  double batch_term(const Matrix& phi, std::size_t m) const;
  /// dI_ub/dphi for every entry (padding slots get 0).
  Matrix gradient(const Matrix& phi) const;
  double gradient_entry(const Matrix& phi, std::size_t m, std::size_t c) const;
  /// Closed-form Hessian of I_ub with respect to batch m's phi row.
  Matrix batch_hessian(const Matrix& phi, std::size_t m) const;

  double exp_neg_kl(std::size_t m, std::size_t c, std::size_t c2) const {
    return e_[(m * num_classes_ + c) * num_classes_ + c2];
  }

 private:
  std::size_t num_batches_;
  std::size_t num_classes_;
  double h_c_;
  std::vector<double> e_;
  std::vector<unsigned char> live_;  // slot is a real component
};

double upper_bound_objective(const LabeledMixture& mixture, const VariationalAssignment& assignment,
                             const DivergenceMatrices& div);

/// Block-coordinate exponentiated-gradient descent. Each block is one
/// component's phi entries; the multiplicative update keeps them positive
/// and summing to w_i, and the step is halved until the objective does not
/// increase. Throws if the starting point is infeasible.
UpperBoundResult minimize_upper_bound(const LabeledMixture& mixture, const VariationalAssignment& start,
                                      const DivergenceMatrices& div, const UpperBoundOptions& options = {});

}  // namespace mixmi
