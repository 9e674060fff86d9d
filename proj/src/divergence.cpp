#include "mixmi/divergence.hpp"

#include "mixmi/error.hpp"
#include "parallel.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace mixmi {

namespace {

void require_same_dim(const GaussianComponent& p, const GaussianComponent& q) {
  if (p.dim() != q.dim()) {
    throw Error(ErrorKind::InvalidArgument, "components differ in dimension (" +
                                                std::to_string(p.dim()) + " vs " +
                                                std::to_string(q.dim()) + ")");
  }
}

// `scale` is the magnitude of the terms whose sum produced `value`.
double clamp_nonnegative(double value, double scale, const char* what) {
  if (value >= 0.0) return value;
  if (value >= -kNegativeFloor * std::max(1.0, scale)) return 0.0;
  std::ostringstream msg;
  msg.precision(17);
  msg << what << " evaluated to " << value << " (< 0); inputs are inconsistent";
  throw Error(ErrorKind::Numerical, msg.str());
}

}  // namespace

double kl_gaussian(const GaussianComponent& p, const GaussianComponent& q) {
  require_same_dim(p, q);
  const Eigen::Index d = p.dim();
  const Vector delta = p.mean() - q.mean();
  const double quad = q.quad_form(delta);
  // tr(Sq^{-1} Sp) = |Lq^{-1} Lp|_F^2
  const Matrix solved = q.chol().triangularView<Eigen::Lower>().solve(p.chol());
  const double trace = solved.squaredNorm();
  const double value = 0.5 * (quad + q.log_det() - p.log_det() + trace - static_cast<double>(d));
  const double scale = quad + std::abs(q.log_det()) + std::abs(p.log_det()) + trace + static_cast<double>(d);
  return clamp_nonnegative(value, scale, "KL divergence");
}

double chernoff_gaussian(const GaussianComponent& p, const GaussianComponent& q, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  require_same_dim(p, q);
  if (alpha == 0.0 || alpha == 1.0) return 0.0;

  const Matrix mixed = (1.0 - alpha) * p.cov() + alpha * q.cov();
  Eigen::LLT<Matrix> llt(mixed);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::Numerical, "interpolated covariance is not positive definite");
  }
  const Matrix lower = llt.matrixL();
  const double log_det_mixed = 2.0 * lower.diagonal().array().log().sum();
  const Vector delta = p.mean() - q.mean();
  const Vector z = lower.triangularView<Eigen::Lower>().solve(delta);
  const double quad = z.squaredNorm();

  const double det_term = log_det_mixed - (1.0 - alpha) * p.log_det() - alpha * q.log_det();
  const double value = 0.5 * alpha * (1.0 - alpha) * quad + 0.5 * det_term;
  const double scale = quad + std::abs(log_det_mixed) + std::abs(p.log_det()) + std::abs(q.log_det());
  return clamp_nonnegative(value, scale, "Chernoff divergence");
}

double combined_distance(double kl, double chernoff) {
  if (!(kl > 0.0) || !(chernoff > 0.0)) return 0.0;
  if (std::isinf(kl)) return 2.0 * chernoff;
  if (std::isinf(chernoff)) return 2.0 * kl;
  return 2.0 * kl * chernoff / (kl + chernoff);
}

DivergenceMatrices pairwise_matrices(const LabeledMixture& mixture, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  const auto n = static_cast<Eigen::Index>(mixture.size());
  DivergenceMatrices out;
  out.alpha = alpha;
  out.kl = Matrix::Zero(n, n);
  out.chernoff = Matrix::Zero(n, n);
  out.combined = Matrix::Zero(n, n);
  const bool symmetric = alpha == 0.5;
  const auto& active = mixture.active_components();

  detail::parallel_for(active.size(), [&](std::size_t a) {
    const std::size_t i = active[a];
    for (std::size_t j : active) {
      if (i == j) continue;
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      out.kl(r, c) = kl_gaussian(mixture.component(i), mixture.component(j));
      if (!symmetric || j > i) {
        out.chernoff(r, c) = chernoff_gaussian(mixture.component(i), mixture.component(j), alpha);
      }
    }
  });
  if (symmetric) {
    out.chernoff.triangularView<Eigen::StrictlyLower>() = out.chernoff.transpose();
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      out.combined(r, c) = combined_distance(out.kl(r, c), out.chernoff(r, c));
    }
  }
  return out;
}

std::string matrix_to_csv(const Matrix& matrix) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(12);
  out << "row";
  for (Eigen::Index c = 0; c < matrix.cols(); ++c) out << ',' << c;
  out << '\n';
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    out << r;
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) out << ',' << matrix(r, c);
    out << '\n';
  }
  return out.str();
}

}  // namespace mixmi
