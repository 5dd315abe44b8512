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

#ifndef ROTEST_SYNTHETIC_HPP
#define ROTEST_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>

#include "rotest/distributions.hpp"
#include "rotest/policies.hpp"
#include "rotest/sample.hpp"

namespace rotest {

/// How outcomes are realized for positive decisions: a Bernoulli draw with
/// success probability equal to the risk score (binary-outcome regime, needs
/// risks in [0, 1]), or the utility value itself (general-utility regime).
enum class OutcomeModel { BernoulliOfRisk, IdentityUtility };

struct GeneratorSpec {
  RiskDistribution dist0, dist1;
  double group_share = 0.5;  // Pr(G = 1)
  DecisionPolicy policy0, policy1;
  std::size_t n_total = 0;
  OutcomeModel outcome_model = OutcomeModel::BernoulliOfRisk;
  std::uint64_t seed = 0;
};

/// Draws a grouped sample: group by a Bernoulli(group_share) master stream,
/// risk by inverse-CDF sampling from the group's distribution, decision by a
/// Bernoulli draw at the policy's curve, outcome per the outcome model. Each
/// group consumes its own substream, so generation per group is independent
/// and the whole sample is reproducible from the seed.
GroupedSample generate(const GeneratorSpec& spec);

}  // namespace rotest

#endif  // ROTEST_SYNTHETIC_HPP
