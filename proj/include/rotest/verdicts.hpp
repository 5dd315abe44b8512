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

#ifndef ROTEST_VERDICTS_HPP
#define ROTEST_VERDICTS_HPP

#include <optional>
#include <string>

#include "rotest/estimation.hpp"
#include "rotest/polarity.hpp"

namespace rotest {

enum class TestKind { Benchmark, StandardOutcome, Robust };

/// What a test concludes about the relative thresholds. The threshold
/// ordering read off the rate signs does not depend on polarity; polarity
/// only determines which group that ordering counts against.
enum class Conclusion { HigherThresholdForGroup1, HigherThresholdForGroup0, Inconclusive };

enum class DiscriminationAgainst { Group0, Group1, None };

std::string to_string(TestKind t);
std::string to_string(Conclusion c);
std::string to_string(DiscriminationAgainst d);

/// Point-estimate mode when alpha is empty; otherwise a conclusion is issued
/// only when its one-tailed p-value(s) pass the level.
struct VerdictMode {
  std::optional<double> alpha;

  static VerdictMode point() { return {}; }
  static VerdictMode significance(double alpha) { return {alpha}; }
};

struct Verdict {
  TestKind test = TestKind::Benchmark;
  Conclusion conclusion = Conclusion::Inconclusive;
  DiscriminationAgainst discrimination_against = DiscriminationAgainst::None;
  std::optional<double> alpha;    // present in significance mode
  std::optional<double> p_value;  // present in significance mode
};

/// Maps a threshold-ordering conclusion onto the polarity-aware
/// discrimination label: under a desirable decision the higher-threshold
/// group is the one discriminated against; under an undesirable decision it
/// is the lower-threshold group.
DiscriminationAgainst discrimination_from(Conclusion c, DecisionPolarity polarity);

/// Sign of the decision-rate difference: delta_dr < 0 reads as a higher
/// threshold for group 1.
Verdict benchmark_test(const DeltaEstimates& delta, DecisionPolarity polarity,
                       const VerdictMode& mode = VerdictMode::point());

/// Sign of the outcome-rate difference: delta_or > 0 reads as a higher
/// threshold for group 1 (the Becker reading, subject to inframarginality).
Verdict standard_outcome_test(const DeltaEstimates& delta, DecisionPolarity polarity,
                              const VerdictMode& mode = VerdictMode::point());

/// Conclusive only when the benchmark and outcome signs agree: strictly
/// delta_dr < 0 and delta_or > 0 for a higher group-1 threshold, mirrored for
/// group 0; everything else (ties included) is inconclusive. Significance
/// mode additionally requires the max one-tailed p-value at the level.
Verdict robust_outcome_test(const DeltaEstimates& delta, DecisionPolarity polarity,
                            const VerdictMode& mode = VerdictMode::point());

}  // namespace rotest

#endif  // ROTEST_VERDICTS_HPP
