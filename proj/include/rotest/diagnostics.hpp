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

#ifndef ROTEST_DIAGNOSTICS_HPP
#define ROTEST_DIAGNOSTICS_HPP

#include <cstddef>
#include <vector>

#include "rotest/distributions.hpp"
#include "rotest/sample.hpp"

namespace rotest {

enum class TrendDirection { Increasing, Decreasing };

std::string to_string(TrendDirection d);

/// Weighted least-squares isotonic fit (pool adjacent violators). Returns the
/// fitted values; `weights` must be positive and match `values` in length.
std::vector<double> isotonic_fit(const std::vector<double>& values,
                                 const std::vector<double>& weights, TrendDirection direction);

/// How far the binned posterior curve is from monotone.
///
/// violation_score is the count-weighted mean absolute deviation between the
/// curve and its best monotone fit, normalized by the curve's weighted mean
/// absolute deviation from its own weighted mean, capped at 1. It is 0 iff
/// the binned curve is already monotone in the chosen direction.
struct MonotonicityReport {
  std::vector<PosteriorBin> curve;
  TrendDirection direction = TrendDirection::Increasing;
  double violation_score = 0.0;
  std::vector<double> isotonic;  // fitted monotone curve, one value per bin
  bool degenerate = false;       // all bins identical: score 0, direction arbitrary
};

/// Bins the posterior Pr(G = 1 | R) and scores its departure from
/// monotonicity, fitting isotonic curves in both directions and keeping the
/// one with the smaller weighted L1 deviation. Throws MissingRiskScores when
/// risk scores are absent.
MonotonicityReport monotonicity_violation(const GroupedSample& sample, std::size_t bins,
                                          std::size_t min_bin_count = 50);

}  // namespace rotest

#endif  // ROTEST_DIAGNOSTICS_HPP
