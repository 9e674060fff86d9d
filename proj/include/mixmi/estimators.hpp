#pragma once

#include "mixmi/divergence.hpp"
#include "mixmi/mixture.hpp"

namespace mixmi {

enum class EstimatorMethod { KL, Chernoff, Combined };

struct MiEstimate {
  double value = 0.0;  // nats
  EstimatorMethod method = EstimatorMethod::KL;
  double alpha = kDefaultAlpha;
};

/// H(C) - sum_i w_i ln[ sum_j w_j e^{-num_ij} / sum_{k in class(i)} w_k e^{-den_ik} ].
///
/// The estimators use the same matrix in both places; the entropy-derived
/// baseline bounds mix KL and Chernoff. Inner sums are evaluated in the log
/// domain, and zero-weight components are skipped.
double pairwise_ratio_mi(const LabeledMixture& mixture, const Matrix& numerator_div,
                         const Matrix& denominator_div);

MiEstimate estimate_mi(const LabeledMixture& mixture, const DivergenceMatrices& div,
                       EstimatorMethod method);

}  // namespace mixmi
