#pragma once

#include "mixmi/divergence.hpp"
#include "mixmi/mixture.hpp"

namespace mixmi {

/// Mutual-information bounds obtained by differencing pairwise mixture
/// entropy bounds.
struct BaselineBounds {
  double lower = 0.0;  // Chernoff in the numerator, KL in the denominator
  double upper = 0.0;  // KL in the numerator, Chernoff in the denominator
  bool ordered = true; // lower <= upper + 1e-12
};

BaselineBounds baseline_bounds(const LabeledMixture& mixture, const DivergenceMatrices& div);

}  // namespace mixmi
