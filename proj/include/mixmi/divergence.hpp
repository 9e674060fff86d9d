#pragma once

#include "mixmi/gaussian.hpp"
#include "mixmi/mixture.hpp"

#include <string>

namespace mixmi {

inline constexpr double kDefaultAlpha = 0.5;
/// Negative divergences from cancellation are clamped to zero when their
/// magnitude is below this (scaled by the size of the summed terms).
inline constexpr double kNegativeFloor = 1e-12;

/// KL(p || q) between Gaussians, nats.
double kl_gaussian(const GaussianComponent& p, const GaussianComponent& q);

/// Chernoff-alpha divergence -ln \int p^alpha q^(1-alpha), nats.
/// Zero at alpha in {0, 1}; throws for alpha outside [0, 1].
double chernoff_gaussian(const GaussianComponent& p, const GaussianComponent& q, double alpha);

/// Harmonic mean of KL and Chernoff; zero whenever either input is zero.
double combined_distance(double kl, double chernoff);

struct DivergenceMatrices {
  Matrix kl;
  Matrix chernoff;
  Matrix combined;
  double alpha = kDefaultAlpha;
};

/// N x N matrices over all components. Rows and columns of zero-weight
/// components are left at zero.
DivergenceMatrices pairwise_matrices(const LabeledMixture& mixture, double alpha = kDefaultAlpha);

/// Row-major CSV with a header row of component indices.
std::string matrix_to_csv(const Matrix& matrix);

}  // namespace mixmi
