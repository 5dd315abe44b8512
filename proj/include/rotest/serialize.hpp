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

#ifndef ROTEST_SERIALIZE_HPP
#define ROTEST_SERIALIZE_HPP

#include <json.hpp>

#include "rotest/distributions.hpp"
#include "rotest/oracle.hpp"
#include "rotest/policies.hpp"
#include "rotest/simulation.hpp"
#include "rotest/synthetic.hpp"
#include "rotest/verdicts.hpp"

namespace rotest {

// Policies serialize to {"kind": ..., <params>}.
nlohmann::json policy_to_json(const DecisionPolicy& policy);
DecisionPolicy policy_from_json(const nlohmann::json& j);

// Distributions serialize the same way; tilted distributions carry a function
// handle and are not serializable.
nlohmann::json distribution_to_json(const RiskDistribution& dist);
RiskDistribution distribution_from_json(const nlohmann::json& j);

nlohmann::json generator_spec_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const DiscreteInstance& instance);
DiscreteInstance instance_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const Verdict& verdict);

/// Distribution-sourced simulation configs:
/// {dist0, dist1, group_share, family, sigma2?, percentiles?, polarity, seed,
///  per_group_percentiles?}.
SimulationConfig simulation_config_from_json(const nlohmann::json& j);
nlohmann::json simulation_config_to_json(const SimulationConfig& config);

}  // namespace rotest

#endif  // ROTEST_SERIALIZE_HPP
