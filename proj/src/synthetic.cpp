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

#include "rotest/synthetic.hpp"

#include "rotest/random.hpp"

namespace rotest {

GroupedSample generate(const GeneratorSpec& spec) {
  if (!(spec.group_share > 0.0 && spec.group_share < 1.0))
    throw Error("generate: group_share must lie strictly inside (0, 1)");
  if (spec.n_total < 1) throw Error("generate: n_total must be >= 1");

  Rng master = Rng::stream(spec.seed, 0);
  Rng stream0 = Rng::stream(spec.seed, 1);
  Rng stream1 = Rng::stream(spec.seed, 2);

  GroupedSample sample;
  sample.rows.reserve(spec.n_total);
  for (std::size_t i = 0; i < spec.n_total; ++i) {
    const bool in_group1 = master.bernoulli(spec.group_share);
    Rng& rng = in_group1 ? stream1 : stream0;
    const RiskDistribution& dist = in_group1 ? spec.dist1 : spec.dist0;
    const DecisionPolicy& policy = in_group1 ? spec.policy1 : spec.policy0;

    SampleRow row;
    row.group = in_group1 ? 1 : 0;
    const double risk = quantile(dist, rng.uniform01_open());
    row.risk = risk;
    row.decision = rng.bernoulli(apply(policy, risk)) ? 1 : 0;
    if (row.decision == 1) {
      if (spec.outcome_model == OutcomeModel::BernoulliOfRisk) {
        if (risk < 0.0 || risk > 1.0)
          throw Error("generate: BernoulliOfRisk needs risks in [0, 1]");
        row.outcome = rng.bernoulli(risk) ? 1.0 : 0.0;
      } else {
        row.outcome = risk;
      }
    }
    sample.rows.push_back(row);
  }
  return sample;
}

}  // namespace rotest
