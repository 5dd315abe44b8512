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

#ifndef ROTEST_ESTIMATION_HPP
#define ROTEST_ESTIMATION_HPP

#include <cstddef>
#include <optional>

#include "rotest/errors.hpp"
#include "rotest/polarity.hpp"
#include "rotest/sample.hpp"

namespace rotest {

/// Which denominator the outcome sample variance uses.
///
/// PositiveCount divides by n_{g,1} - 1, the count of positive decisions the
/// outcomes are actually summed over, so that se = sqrt(svar / n_{g,1})
/// estimates the standard error of the outcome rate. GroupCount divides by
/// n_g - 1 and is kept for comparison with the literal published display,
/// which sums over positives but divides by the whole group; it is not a
/// consistent variance estimate for the outcomes of positives.
enum class VarianceDenominator { PositiveCount, GroupCount };

/// Decision and outcome rates for one group, with standard errors.
/// Outcome fields are empty when no decision was positive; the outcome SE is
/// empty when fewer than two decisions were positive.
struct RateSummary {
  int group = 0;
  std::size_t n = 0;
  std::size_t n_positive = 0;
  double decision_rate = 0.0;
  double se_decision_rate = 0.0;
  std::optional<double> outcome_rate;
  std::optional<double> outcome_sample_variance;
  std::optional<double> se_outcome_rate;

  bool se_available() const { return se_outcome_rate.has_value(); }
};

/// Group differences (group 1 minus group 0) with standard errors combined in
/// quadrature under the approximate-independence argument.
struct DeltaEstimates {
  double delta_dr = 0.0;
  double delta_or = 0.0;
  double se_delta_dr = 0.0;
  double se_delta_or = 0.0;
};

/// The elliptical confidence region for (delta_dr, delta_or): the set of
/// points whose standardized squared distance from the center is at most the
/// chi-squared(2) quantile x_{1-alpha} = -2 ln(alpha).
///
/// A zero axis collapses the region onto the corresponding line; membership
/// then requires that coordinate to match the center exactly.
struct ConfidenceRegion {
  double center_dr = 0.0;
  double center_or = 0.0;
  double se_dr = 0.0;
  double se_or = 0.0;
  double radius_squared = 0.0;
  double alpha = 0.0;

  bool contains(double delta_dr, double delta_or) const;
};

/// Empirical decision/outcome rates for one group of the sample.
/// Throws EmptyGroup when the group has no rows. With zero positive
/// decisions the outcome fields stay empty; with one positive decision the
/// outcome rate is present but its SE stays empty.
RateSummary estimate_rates(const GroupedSample& sample, int group,
                           VarianceDenominator denom = VarianceDenominator::PositiveCount);

/// Aggregate-mode construction from pre-computed counts, for CSV ingestion
/// without unit-level rows.
RateSummary summary_from_counts(int group, std::size_t n, std::size_t n_positive,
                                double outcome_sum, double outcome_sum_sq,
                                VarianceDenominator denom = VarianceDenominator::PositiveCount);

/// Throws UnavailableSE when either summary lacks an outcome SE.
DeltaEstimates delta_with_errors(const RateSummary& s0, const RateSummary& s1);

ConfidenceRegion confidence_region(const DeltaEstimates& delta, double alpha);

/// The maximum of the two one-tailed normal p-values for the pattern
/// "discrimination against group 1" under the given polarity:
///   desirable:   delta_dr < 0 and delta_or > 0
///   undesirable: delta_dr > 0 and delta_or < 0.
/// The group-0 direction is obtained by negating the deltas. Throws ZeroSE
/// when either standard error is zero.
double robust_p_value(const DeltaEstimates& delta, DecisionPolarity polarity);

/// One-tailed normal upper-tail probability Pr(Z >= z).
double normal_tail(double z);

}  // namespace rotest

#endif  // ROTEST_ESTIMATION_HPP
