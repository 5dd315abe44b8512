// Copyright 2026 The rotest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROTEST_SIMULATION_HPP
#define ROTEST_SIMULATION_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotest/distributions.hpp"
#include "rotest/polarity.hpp"
#include "rotest/policies.hpp"
#include "rotest/sample.hpp"
#include "rotest/verdicts.hpp"

namespace rotest {

enum class PolicyFamily { Threshold, BetaCdf };

std::string to_string(PolicyFamily f);
PolicyFamily policy_family_from_string(const std::string& s);

/// The actual threshold ordering a grid cell was generated with.
enum class TrueOrdering { Group1Higher, Group0Higher, Equal };

std::string to_string(TrueOrdering t);

/// Where the swept risk scores come from: a pair of risk distributions with a
/// group share, or an observed sample carrying risk scores.
struct RiskPopulation {
  std::optional<RiskDistribution> dist0, dist1;
  double group_share = 0.5;
  std::optional<GroupedSample> sample;

  static RiskPopulation from_distributions(RiskDistribution d0, RiskDistribution d1,
                                           double share);
  static RiskPopulation from_sample(GroupedSample s);

  bool sample_source() const { return sample.has_value(); }
};

struct SimulationConfig {
  RiskPopulation population;
  PolicyFamily family = PolicyFamily::Threshold;
  std::optional<double> sigma2;  // BetaCdf family; defaults to (half the pooled SD)^2
  std::vector<int> percentiles;  // defaults to 1..99; 0 and 100 are rejected
  DecisionPolarity polarity = DecisionPolarity::PositiveDesirable;
  std::uint64_t seed = 0;
  bool per_group_percentiles = false;  // non-default: thresholds from per-group quantiles
  unsigned threads = 0;                // 0 = hardware concurrency
};

struct GridCell {
  int percentile_g0 = 0, percentile_g1 = 0;
  double t_g0 = 0.0, t_g1 = 0.0;
  double delta_dr = 0.0, delta_or = 0.0;
  Conclusion robust = Conclusion::Inconclusive;
  Conclusion standard = Conclusion::Inconclusive;
  Conclusion benchmark = Conclusion::Inconclusive;
  TrueOrdering truth = TrueOrdering::Equal;
  bool degenerate = false;  // zero decision mass or an invalid cell policy
};

struct SimulationGrid {
  std::vector<int> percentiles;
  std::vector<GridCell> cells;  // row-major: cell (i, j) = percentile pair (g0[i], g1[j])

  const GridCell& at(std::size_t i, std::size_t j) const {
    return cells[i * percentiles.size() + j];
  }
};

/// Decision and outcome rate of one group's weighted risk atoms under a
/// policy:  DR = sum w d(r) / sum w,  OR = sum w d(r) r / sum w d(r).
/// Throws ZeroDecisionMass when no decision mass survives.
std::pair<double, double> rates_under_policy(
    const std::vector<std::pair<double, double>>& risks, const DecisionPolicy& policy);

/// Same rates computed against a risk distribution: exact sums on atoms,
/// closed forms for threshold policies, quadrature otherwise.
std::pair<double, double> rates_under_policy(const RiskDistribution& dist,
                                             const DecisionPolicy& policy);

/// Sweeps group-specific policies over the percentile grid of the pooled risk
/// population and classifies every cell with the three tests. Deterministic
/// for a fixed config; cells are computed independently and may run on
/// several threads.
SimulationGrid sweep(const SimulationConfig& config);

/// True when the cell's conclusion points against the generated ordering.
bool wrong_direction(Conclusion conclusion, TrueOrdering truth);

void write_grid_csv(const SimulationGrid& grid, std::ostream& out);

/// Named synthetic configurations used by tests and the CLI:
///   beta-similar         MLRP-exact beta pair with close base rates
///   beta-gap             MLRP-exact beta pair with a wide base-rate gap
///   beta-gap-perturbed   discretized beta-gap with group-1 masses perturbed
///                        by up to 10% relative (an MLRP violation)
///   beta-similar-betacdf beta-similar swept with beta-CDF policies
SimulationConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace rotest

#endif  // ROTEST_SIMULATION_HPP
