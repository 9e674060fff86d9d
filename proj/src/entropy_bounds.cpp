#include "mixmi/entropy_bounds.hpp"

#include "mixmi/estimators.hpp"

namespace mixmi {

BaselineBounds baseline_bounds(const LabeledMixture& mixture, const DivergenceMatrices& div) {
  BaselineBounds out;
  out.lower = pairwise_ratio_mi(mixture, div.chernoff, div.kl);
  out.upper = pairwise_ratio_mi(mixture, div.kl, div.chernoff);
  out.ordered = out.lower <= out.upper + 1e-12;
  return out;
}

}  // namespace mixmi
