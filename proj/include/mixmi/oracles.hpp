#pragma once

#include "mixmi/mixture.hpp"

#include <cstdint>

namespace mixmi {

struct OracleResult {
  double value = 0.0;      // nats
  double std_error = 0.0;  // 0 for quadrature
  std::uint64_t samples_or_grid = 0;
  std::uint64_t seed = 0;
};

/// Samples drawn per independently seeded chunk of a component's stratum.
inline constexpr std::uint64_t kMcChunkSize = 16384;

/// Stratified Monte Carlo estimate of I(x; C). Component i receives
/// max(1, floor(w_i n)) draws, the remainder going to the largest weights.
/// Each stratum chunk has its own stream seeded from (seed, i, chunk), so the
/// result does not depend on the worker count.
OracleResult mc_mutual_information(const LabeledMixture& mixture, std::uint64_t n_samples,
                                   std::uint64_t seed);

/// Tensor trapezoid rule over means +/- 8 max standard deviations, d <= 2.
OracleResult quadrature_mutual_information(const LabeledMixture& mixture, int points_per_axis);

/// Bayes error \int pr(x) - max_c pr(x, c) dx by the same quadrature, d <= 2.
double quadrature_bayes_error(const LabeledMixture& mixture, int points_per_axis);

}  // namespace mixmi
