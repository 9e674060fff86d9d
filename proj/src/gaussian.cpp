#include "mixmi/gaussian.hpp"

#include "mixmi/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace mixmi {

namespace {

constexpr Eigen::Index kStackDim = 16;

Matrix cholesky_or_throw(const Matrix& cov, const char* what) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::Validation, std::string(what) + " is not positive definite");
  }
  Matrix lower = llt.matrixL();
  for (Eigen::Index k = 0; k < lower.rows(); ++k) {
    if (!(lower(k, k) > 0.0) || !std::isfinite(lower(k, k))) {
      throw Error(ErrorKind::Validation, std::string(what) + " is not positive definite");
    }
  }
  return lower;
}

// Solves L z = delta in place and returns |z|^2.
double forward_solve_norm(const Matrix& lower, double* z) {
  const Eigen::Index d = lower.rows();
  double norm = 0.0;
  for (Eigen::Index r = 0; r < d; ++r) {
    double s = z[r];
    for (Eigen::Index c = 0; c < r; ++c) s -= lower(r, c) * z[c];
    z[r] = s / lower(r, r);
    norm += z[r] * z[r];
  }
  return norm;
}

}  // namespace

Matrix checked_symmetric(const Matrix& cov) {
  if (cov.rows() != cov.cols()) {
    throw Error(ErrorKind::Validation, "covariance must be square");
  }
  if (!cov.allFinite()) {
    throw Error(ErrorKind::Validation, "covariance has non-finite entries");
  }
  const double asymmetry = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > kSymmetryTolerance) {
    throw Error(ErrorKind::Validation, "covariance is not symmetric (max |A - A^T| = " +
                                           std::to_string(asymmetry) + ")");
  }
  return 0.5 * (cov + cov.transpose());
}

GaussianComponent::GaussianComponent(Vector mean, Matrix cov) : mean_(std::move(mean)) {
  if (mean_.size() < 1) {
    throw Error(ErrorKind::Validation, "component dimension must be at least 1");
  }
  if (!mean_.allFinite()) {
    throw Error(ErrorKind::Validation, "mean has non-finite entries");
  }
  if (cov.rows() != mean_.size() || cov.cols() != mean_.size()) {
    throw Error(ErrorKind::Validation, "covariance shape does not match mean length");
  }
  cov_ = checked_symmetric(cov);
  chol_ = cholesky_or_throw(cov_, "covariance");
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
  log_norm_ = -0.5 * static_cast<double>(dim()) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det_;
}

double GaussianComponent::log_density(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != dim()) {
    throw Error(ErrorKind::InvalidArgument, "point dimension " + std::to_string(x.size()) +
                                                " does not match component dimension " +
                                                std::to_string(dim()));
  }
  const Vector contiguous = x;
  return log_density_unchecked(contiguous.data());
}

double GaussianComponent::log_density_unchecked(const double* x) const {
  const Eigen::Index d = dim();
  std::array<double, kStackDim> stack;
  std::vector<double> heap;
  double* z = stack.data();
  if (d > kStackDim) {
    heap.resize(static_cast<std::size_t>(d));
    z = heap.data();
  }
  for (Eigen::Index k = 0; k < d; ++k) z[k] = x[k] - mean_[k];
  return log_norm_ - 0.5 * forward_solve_norm(chol_, z);
}

double GaussianComponent::quad_form(const Eigen::Ref<const Vector>& delta) const {
  if (delta.size() != dim()) {
    throw Error(ErrorKind::InvalidArgument, "delta dimension does not match component");
  }
  Vector z = delta;
  return forward_solve_norm(chol_, z.data());
}

Vector GaussianComponent::sample(Rng& rng) const {
  Vector out(dim());
  sample_into(rng, out.data());
  return out;
}

void GaussianComponent::sample_into(Rng& rng, double* out) const {
  const Eigen::Index d = dim();
  std::normal_distribution<double> normal;
  std::array<double, kStackDim> stack;
  std::vector<double> heap;
  double* z = stack.data();
  if (d > kStackDim) {
    heap.resize(static_cast<std::size_t>(d));
    z = heap.data();
  }
  for (Eigen::Index k = 0; k < d; ++k) z[k] = normal(rng);
  for (Eigen::Index r = 0; r < d; ++r) {
    double s = mean_[r];
    for (Eigen::Index c = 0; c <= r; ++c) s += chol_(r, c) * z[c];
    out[r] = s;
  }
}

double mahalanobis_sq(const Eigen::Ref<const Vector>& delta, const Matrix& mix_cov) {
  if (mix_cov.rows() != delta.size() || mix_cov.cols() != delta.size()) {
    throw Error(ErrorKind::InvalidArgument, "metric shape does not match delta length");
  }
  const Matrix lower = cholesky_or_throw(checked_symmetric(mix_cov), "metric matrix");
  Vector z = delta;
  return forward_solve_norm(lower, z.data());
}

}  // namespace mixmi
