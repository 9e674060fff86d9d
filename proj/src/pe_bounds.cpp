#include "mixmi/pe_bounds.hpp"

#include "mixmi/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mixmi {

namespace {

constexpr int kBisectionSteps = 200;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

void require_binary(const ClassMarginal& marginal) {
  if (marginal.num_classes() != 2) {
    throw Error(ErrorKind::Unsupported, "error-probability bounds need exactly 2 classes, got " +
                                            std::to_string(marginal.num_classes()));
  }
}

// Residual label uncertainty H(C) - I in bits, floored at zero.
double residual_bits(double mi_nats, const ClassMarginal& marginal) {
  const double residual = (label_entropy(marginal) - mi_nats) / std::numbers::ln2;
  return std::max(0.0, residual);
}

// Smallest x in [lo, hi] with f(x) >= y for increasing f.
template <class F>
double bisect_increasing(F f, double y, double lo, double hi) {
  for (int step = 0; step < kBisectionSteps && hi - lo > 0.0; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(f(lo) - y) <= std::abs(f(hi) - y) ? lo : hi;
}

// Round-off can push the smaller of two class probabilities just above 1/2.
double smaller_class(const ClassMarginal& marginal) {
  return std::min({marginal.probs[0], marginal.probs[1], 0.5});
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "binary entropy argument must lie in [0, 1]");
  }
  return -xlog2x(x) - xlog2x(1.0 - x);
}

double inverse_binary_entropy(double h) {
  if (!(h >= 0.0 && h <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "binary entropy value must lie in [0, 1]");
  }
  if (h == 0.0) return 0.0;
  if (h == 1.0) return 0.5;
  return bisect_increasing([](double x) { return binary_entropy(x); }, h, 0.0, 0.5);
}

double hu_f(double x, double p_min) {
  if (!(p_min > 0.0 && p_min <= 0.5 + kWeightSumTolerance)) {
    throw Error(ErrorKind::InvalidArgument, "P_min must lie in (0, 1/2]");
  }
  if (!(x >= 0.0)) throw Error(ErrorKind::InvalidArgument, "f argument must be non-negative");
  const double total = x + p_min;
  double value = -p_min * std::log2(p_min / total);
  if (x > 0.0) value -= x * std::log2(x / total);
  return value;
}

double hu_f_inverse(double y, double p_min) {
  const double top = hu_f(p_min, p_min);
  if (!(y > 0.0)) return 0.0;
  if (y >= top) return p_min;
  return bisect_increasing([p_min](double x) { return hu_f(x, p_min); }, y, 0.0, p_min);
}

double fano_lower_pe(double mi_nats, const ClassMarginal& marginal) {
  require_binary(marginal);
  return inverse_binary_entropy(std::min(1.0, residual_bits(mi_nats, marginal)));
}

double hu_upper_pe(double mi_nats, const ClassMarginal& marginal) {
  require_binary(marginal);
  const double p_min = smaller_class(marginal);
  return std::clamp(hu_f_inverse(residual_bits(mi_nats, marginal), p_min), 0.0, p_min);
}

PeResult pe_bounds(double mi_nats, const ClassMarginal& marginal) {
  PeResult out;
  out.fano_lower = fano_lower_pe(mi_nats, marginal);
  out.hu_upper = hu_upper_pe(mi_nats, marginal);
  out.source_mi = mi_nats;
  out.p_min = smaller_class(marginal);
  return out;
}

}  // namespace mixmi
