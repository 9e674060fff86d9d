#pragma once

#include <Eigen/Dense>

#include <random>

namespace mixmi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Random stream used for all sampling. std::normal_distribution is
/// implementation defined, so sequences are reproducible within one build.
using Rng = std::mt19937_64;

/// Largest entrywise asymmetry |A - A^T| tolerated (and symmetrized away).
inline constexpr double kSymmetryTolerance = 1e-12;

/// Multivariate normal component with its Cholesky factor cached at
/// construction. Construction fails for asymmetric or non-SPD covariances,
/// so every live instance is usable for densities and divergences.
class GaussianComponent {
 public:
  GaussianComponent(Vector mean, Matrix cov);

  Eigen::Index dim() const { return mean_.size(); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  /// Lower-triangular L with L L^T = cov.
  const Matrix& chol() const { return chol_; }
  /// ln|cov|.
  double log_det() const { return log_det_; }

  /// ln N(x; mean, cov) in nats.
  double log_density(const Eigen::Ref<const Vector>& x) const;
  /// Same as log_density, without the dimension check. `x` points at dim()
  /// contiguous values.
  double log_density_unchecked(const double* x) const;

  /// delta^T cov^{-1} delta using the cached factor.
  double quad_form(const Eigen::Ref<const Vector>& delta) const;

  /// mean + L z with z standard normal.
  Vector sample(Rng& rng) const;
  /// Writes one draw into `out` (dim() values) without allocating.
  void sample_into(Rng& rng, double* out) const;

 private:
  Vector mean_;
  Matrix cov_;
  Matrix chol_;
  double log_det_ = 0.0;
  double log_norm_ = 0.0;  // -d/2 ln(2 pi) - log_det/2
};

/// Symmetrizes `cov` if it is symmetric within kSymmetryTolerance, throws
/// otherwise.
Matrix checked_symmetric(const Matrix& cov);

/// delta^T mix_cov^{-1} delta; throws if mix_cov is not SPD.
double mahalanobis_sq(const Eigen::Ref<const Vector>& delta, const Matrix& mix_cov);

}  // namespace mixmi
