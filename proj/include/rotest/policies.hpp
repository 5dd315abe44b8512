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

#ifndef ROTEST_POLICIES_HPP
#define ROTEST_POLICIES_HPP

#include <variant>
#include <vector>

#include "rotest/distributions.hpp"
#include "rotest/errors.hpp"

namespace rotest {

/// A risk-decision curve: the probability of a positive decision as a
/// function of utility. Every kind is right-continuous, non-decreasing, and
/// valued in [0, 1].
class DecisionPolicy {
 public:
  enum class Kind { Threshold, Logistic, BetaCdf, StepFunction };

  struct ThresholdParams {
    double t;
  };
  struct LogisticParams {
    double t;
    double lambda;  // sensitivity; the threshold rule is the lambda -> inf limit
  };
  struct BetaCdfParams {
    double t;       // mean of the underlying beta
    double sigma2;  // its variance; must satisfy sigma2 < t (1 - t)
    double alpha, beta;
  };
  struct StepParams {
    std::vector<double> breakpoints;  // strictly increasing
    std::vector<double> levels;       // non-decreasing, in [0, 1]; value is 0 before
                                      // the first breakpoint, levels[i] on
                                      // [breakpoints[i], breakpoints[i+1])
  };

  static DecisionPolicy threshold(double t);
  static DecisionPolicy logistic(double t, double lambda);
  static DecisionPolicy beta_cdf(double t, double sigma2);
  static DecisionPolicy step_function(std::vector<double> breakpoints,
                                      std::vector<double> levels);

  Kind kind() const { return kind_; }
  const ThresholdParams& threshold_params() const { return std::get<ThresholdParams>(params_); }
  const LogisticParams& logistic_params() const { return std::get<LogisticParams>(params_); }
  const BetaCdfParams& beta_cdf_params() const { return std::get<BetaCdfParams>(params_); }
  const StepParams& step_params() const { return std::get<StepParams>(params_); }

 private:
  using Params = std::variant<ThresholdParams, LogisticParams, BetaCdfParams, StepParams>;
  DecisionPolicy(Kind kind, Params params) : kind_(kind), params_(std::move(params)) {}

  Kind kind_;
  Params params_;
};

/// Pr(D = 1 | U = u) under the policy.
double apply(const DecisionPolicy& policy, double u);

/// The distribution on the extended reals whose CDF coincides with the
/// policy's curve; endpoint masses carry the curve's limits at -inf/+inf.
ExtendedDistribution generated_distribution(const DecisionPolicy& policy);

/// The dyadic step approximation F_n of a policy's curve: 2^n breakpoints at
/// the level crossings k 2^{-n}, with +inf standing in for levels the curve
/// never reaches. Satisfies 0 <= d(u) - F_n(u) < 2^{-n} everywhere.
struct DyadicApproximation {
  int level = 1;
  std::vector<double> breakpoints;

  double evaluate(double u) const;
};

DyadicApproximation dyadic_approximation(const DecisionPolicy& policy, int level);

/// Smallest representable u with apply(policy, u) >= y, for y in (0, 1];
/// +inf when the curve never reaches y. This is the dyadic breakpoint
/// construction's level inversion, computed from the closed-form inverse and
/// then refined to the exact floating-point infimum.
double level_infimum(const DecisionPolicy& policy, double y);

/// Checks the MLRP hypothesis on the distributions the two policies generate.
OrderingReport policies_mlrp_ordered(const DecisionPolicy& p0, const DecisionPolicy& p1,
                                     const GridSpec& grid = {});

}  // namespace rotest

#endif  // ROTEST_POLICIES_HPP
