#pragma once

#include "mixmi/mixture.hpp"

namespace mixmi {

// Error-probability bounds for binary classification. These work in bits;
// mutual information arrives in nats and is converted on entry.

/// -x log2 x - (1-x) log2(1-x).
double binary_entropy(double x);

/// Solution in [0, 1/2] of binary_entropy(x) = h, by bisection.
double inverse_binary_entropy(double h);

/// f(x) = -p log2(p / (x + p)) - x log2(x / (x + p)), increasing on [0, p].
double hu_f(double x, double p_min);

/// Solution in [0, p_min] of hu_f(x) = y; p_min when y >= hu_f(p_min).
double hu_f_inverse(double y, double p_min);

/// Fano: Pe >= h_b^{-1}[H(C) - I]. Throws unless there are exactly 2 classes.
double fano_lower_pe(double mi_nats, const ClassMarginal& marginal);

/// Pe <= min{P_min, f^{-1}[H(C) - I]}. Throws unless there are exactly 2 classes.
double hu_upper_pe(double mi_nats, const ClassMarginal& marginal);

struct PeResult {
  double fano_lower = 0.0;
  double hu_upper = 0.0;
  double source_mi = 0.0;  // nats
  double p_min = 0.0;
};

PeResult pe_bounds(double mi_nats, const ClassMarginal& marginal);

}  // namespace mixmi
