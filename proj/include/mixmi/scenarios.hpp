#pragma once

#include "mixmi/mixture.hpp"
#include "mixmi/report.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mixmi {

enum class ScenarioId { UniformBoundary = 1, OneGroup = 2, MultiGroup = 3 };

/// Two-class, 2-D homoscedastic test geometries. Class 1 sits left of the
/// vertical boundary x = 0, class 2 to the right.
///  - UniformBoundary: centers at (-/+offset, y_k), y_k evenly spaced on [0, boundary_length].
///  - OneGroup: centers drawn around (-/+offset, boundary_length/2) with
///    standard deviation one_group_spread.
///  - MultiGroup: group_count clusters evenly spaced along the boundary,
///    components assigned round-robin, spread group_spread.
struct ScenarioSpec {
  ScenarioId id = ScenarioId::UniformBoundary;
  int components_per_class = 20;
  double sigma = 0.5;
  std::uint64_t seed = 1;
  double boundary_length = 10.0;
  double offset = 0.5;
  int group_count = 5;
  double one_group_spread = 1.0;
  double group_spread = 0.5;

  void validate() const;
};

LabeledMixture generate(const ScenarioSpec& spec);

/// Reads a scenario spec from JSON; absent keys keep their defaults.
/// Keys: scenario (1-3), components_per_class, sigma, seed, boundary_length,
/// offset, group_count, one_group_spread, group_spread.
ScenarioSpec scenario_from_json(std::string_view json_text);

/// n values log-spaced on [lo, hi] (n == 1 gives lo).
std::vector<double> log_spaced(double lo, double hi, int n);

/// One report per sigma; the template's sigma is ignored.
std::vector<MiReport> sigma_sweep(const ScenarioSpec& templ, std::span<const double> sigmas,
                                  const ReportOptions& options);

}  // namespace mixmi
