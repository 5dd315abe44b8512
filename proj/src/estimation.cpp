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

#include "rotest/estimation.hpp"

#include <cmath>

namespace rotest {

double normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

RateSummary finish_summary(int group, std::size_t n, std::size_t n_positive, double outcome_sum,
                           double centered_sum_sq, VarianceDenominator denom) {
  if (n == 0) throw EmptyGroup("group " + std::to_string(group) + " has no rows");

  RateSummary s;
  s.group = group;
  s.n = n;
  s.n_positive = n_positive;
  s.decision_rate = static_cast<double>(n_positive) / static_cast<double>(n);
  s.se_decision_rate =
      std::sqrt(s.decision_rate * (1.0 - s.decision_rate) / static_cast<double>(n));

  if (n_positive >= 1) s.outcome_rate = outcome_sum / static_cast<double>(n_positive);
  const std::size_t var_denominator =
      denom == VarianceDenominator::PositiveCount ? n_positive : n;
  if (n_positive >= 2 && var_denominator >= 2) {
    const double svar = std::max(0.0, centered_sum_sq) / static_cast<double>(var_denominator - 1);
    s.outcome_sample_variance = svar;
    s.se_outcome_rate = std::sqrt(svar / static_cast<double>(n_positive));
  }
  return s;
}

}  // namespace

RateSummary estimate_rates(const GroupedSample& sample, int group, VarianceDenominator denom) {
  std::size_t n = 0, n_positive = 0;
  double outcome_sum = 0.0;
  for (const auto& r : sample.rows) {
    if (r.group != group) continue;
    ++n;
    if (r.decision == 1) {
      if (!r.outcome)
        throw Error("row with decision = 1 is missing its outcome");
      ++n_positive;
      outcome_sum += *r.outcome;
    }
  }
  if (n == 0) throw EmptyGroup("group " + std::to_string(group) + " has no rows");

  // second pass for a numerically stable centered sum of squares
  double centered_sum_sq = 0.0;
  if (n_positive > 0) {
    const double mean = outcome_sum / static_cast<double>(n_positive);
    for (const auto& r : sample.rows) {
      if (r.group != group || r.decision != 1) continue;
      const double d = *r.outcome - mean;
      centered_sum_sq += d * d;
    }
  }
  return finish_summary(group, n, n_positive, outcome_sum, centered_sum_sq, denom);
}

RateSummary summary_from_counts(int group, std::size_t n, std::size_t n_positive,
                                double outcome_sum, double outcome_sum_sq,
                                VarianceDenominator denom) {
  if (n_positive > n) throw Error("n_positive exceeds n");
  double centered_sum_sq = 0.0;
  if (n_positive > 0) {
    const double mean = outcome_sum / static_cast<double>(n_positive);
    centered_sum_sq = outcome_sum_sq - static_cast<double>(n_positive) * mean * mean;
  }
  return finish_summary(group, n, n_positive, outcome_sum, centered_sum_sq, denom);
}

DeltaEstimates delta_with_errors(const RateSummary& s0, const RateSummary& s1) {
  if (!s0.se_available() || !s1.se_available())
    throw UnavailableSE("outcome-rate standard error unavailable (needs >= 2 positives per group)");
  DeltaEstimates d;
  d.delta_dr = s1.decision_rate - s0.decision_rate;
  d.delta_or = *s1.outcome_rate - *s0.outcome_rate;
  d.se_delta_dr = std::sqrt(s0.se_decision_rate * s0.se_decision_rate +
                            s1.se_decision_rate * s1.se_decision_rate);
  d.se_delta_or =
      std::sqrt(*s0.se_outcome_rate * *s0.se_outcome_rate + *s1.se_outcome_rate * *s1.se_outcome_rate);
  return d;
}

bool ConfidenceRegion::contains(double delta_dr, double delta_or) const {
  double q = 0.0;
  const double ddr = delta_dr - center_dr;
  const double dor = delta_or - center_or;
  if (se_dr > 0.0)
    q += (ddr / se_dr) * (ddr / se_dr);
  else if (ddr != 0.0)
    return false;  // collapsed axis: only the center line belongs
  if (se_or > 0.0)
    q += (dor / se_or) * (dor / se_or);
  else if (dor != 0.0)
    return false;
  return q <= radius_squared;
}

ConfidenceRegion confidence_region(const DeltaEstimates& delta, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("confidence_region requires alpha in (0, 1)");
  ConfidenceRegion region;
  region.center_dr = delta.delta_dr;
  region.center_or = delta.delta_or;
  region.se_dr = delta.se_delta_dr;
  region.se_or = delta.se_delta_or;
  region.radius_squared = -2.0 * std::log(alpha);  // chi-squared(2) quantile, closed form
  region.alpha = alpha;
  return region;
}

double robust_p_value(const DeltaEstimates& delta, DecisionPolarity polarity) {
  if (!(delta.se_delta_dr > 0.0) || !(delta.se_delta_or > 0.0))
    throw ZeroSE("robust_p_value requires positive standard errors");
  const double z_dr = delta.delta_dr / delta.se_delta_dr;
  const double z_or = delta.delta_or / delta.se_delta_or;
  double p_dr, p_or;
  if (polarity == DecisionPolarity::PositiveDesirable) {
    // against group 1: decisions rarer (delta_dr < 0), outcomes better (delta_or > 0)
    p_dr = normal_tail(-z_dr);
    p_or = normal_tail(z_or);
  } else {
    // against group 1: decisions more frequent, outcomes worse
    p_dr = normal_tail(z_dr);
    p_or = normal_tail(-z_or);
  }
  return std::max(p_dr, p_or);
}

}  // namespace rotest
