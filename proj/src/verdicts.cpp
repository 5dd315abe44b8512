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

#include "rotest/verdicts.hpp"

namespace rotest {

std::string to_string(TestKind t) {
  switch (t) {
    case TestKind::Benchmark:
      return "benchmark";
    case TestKind::StandardOutcome:
      return "standard_outcome";
    case TestKind::Robust:
      return "robust";
  }
  return "?";
}

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::HigherThresholdForGroup1:
      return "higher_threshold_for_g1";
    case Conclusion::HigherThresholdForGroup0:
      return "higher_threshold_for_g0";
    case Conclusion::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

std::string to_string(DiscriminationAgainst d) {
  switch (d) {
    case DiscriminationAgainst::Group0:
      return "group0";
    case DiscriminationAgainst::Group1:
      return "group1";
    case DiscriminationAgainst::None:
      return "none";
  }
  return "?";
}

DiscriminationAgainst discrimination_from(Conclusion c, DecisionPolarity polarity) {
  if (c == Conclusion::Inconclusive) return DiscriminationAgainst::None;
  const bool higher_for_g1 = c == Conclusion::HigherThresholdForGroup1;
  if (polarity == DecisionPolarity::PositiveDesirable)
    return higher_for_g1 ? DiscriminationAgainst::Group1 : DiscriminationAgainst::Group0;
  // undesirable: the lower-threshold group bears the decision on weaker evidence
  return higher_for_g1 ? DiscriminationAgainst::Group0 : DiscriminationAgainst::Group1;
}

namespace {

DeltaEstimates negated(const DeltaEstimates& d) {
  return DeltaEstimates{-d.delta_dr, -d.delta_or, d.se_delta_dr, d.se_delta_or};
}

Verdict finish(TestKind test, Conclusion candidate, std::optional<double> p,
               DecisionPolarity polarity, const VerdictMode& mode) {
  Verdict v;
  v.test = test;
  v.alpha = mode.alpha;
  v.p_value = p;
  v.conclusion = candidate;
  if (mode.alpha && candidate != Conclusion::Inconclusive && !(p && *p <= *mode.alpha))
    v.conclusion = Conclusion::Inconclusive;
  v.discrimination_against = discrimination_from(v.conclusion, polarity);
  return v;
}

}  // namespace

Verdict benchmark_test(const DeltaEstimates& delta, DecisionPolarity polarity,
                       const VerdictMode& mode) {
  Conclusion candidate = Conclusion::Inconclusive;
  if (delta.delta_dr < 0.0)
    candidate = Conclusion::HigherThresholdForGroup1;
  else if (delta.delta_dr > 0.0)
    candidate = Conclusion::HigherThresholdForGroup0;

  std::optional<double> p;
  if (mode.alpha) {
    if (!(delta.se_delta_dr > 0.0)) throw ZeroSE("benchmark_test needs a positive decision-rate SE");
    const double z = delta.delta_dr / delta.se_delta_dr;
    p = candidate == Conclusion::HigherThresholdForGroup0 ? normal_tail(z) : normal_tail(-z);
  }
  return finish(TestKind::Benchmark, candidate, p, polarity, mode);
}

Verdict standard_outcome_test(const DeltaEstimates& delta, DecisionPolarity polarity,
                              const VerdictMode& mode) {
  Conclusion candidate = Conclusion::Inconclusive;
  if (delta.delta_or > 0.0)
    candidate = Conclusion::HigherThresholdForGroup1;
  else if (delta.delta_or < 0.0)
    candidate = Conclusion::HigherThresholdForGroup0;

  std::optional<double> p;
  if (mode.alpha) {
    if (!(delta.se_delta_or > 0.0))
      throw ZeroSE("standard_outcome_test needs a positive outcome-rate SE");
    const double z = delta.delta_or / delta.se_delta_or;
    p = candidate == Conclusion::HigherThresholdForGroup1 ? normal_tail(z) : normal_tail(-z);
  }
  return finish(TestKind::StandardOutcome, candidate, p, polarity, mode);
}

Verdict robust_outcome_test(const DeltaEstimates& delta, DecisionPolarity polarity,
                            const VerdictMode& mode) {
  Conclusion candidate = Conclusion::Inconclusive;
  if (delta.delta_dr < 0.0 && delta.delta_or > 0.0)
    candidate = Conclusion::HigherThresholdForGroup1;
  else if (delta.delta_dr > 0.0 && delta.delta_or < 0.0)
    candidate = Conclusion::HigherThresholdForGroup0;

  std::optional<double> p;
  if (mode.alpha) {
    // p-value for the discrimination direction the signs point at; group-0
    // directions are the label swap (negated deltas)
    const DiscriminationAgainst against =
        candidate == Conclusion::Inconclusive
            ? DiscriminationAgainst::Group1
            : discrimination_from(candidate, polarity);
    p = against == DiscriminationAgainst::Group0 ? robust_p_value(negated(delta), polarity)
                                                 : robust_p_value(delta, polarity);
  }
  return finish(TestKind::Robust, candidate, p, polarity, mode);
}

}  // namespace rotest
