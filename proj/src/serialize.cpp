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

#include "rotest/serialize.hpp"

namespace rotest {

using nlohmann::json;

namespace {

double need_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ValueError(std::string("expected numeric field '") + key + "'");
  return j[key].get<double>();
}

std::string need_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw ValueError(std::string("expected string field '") + key + "'");
  return j[key].get<std::string>();
}

std::vector<double> need_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ValueError(std::string("expected array field '") + key + "'");
  return j[key].get<std::vector<double>>();
}

}  // namespace

// ---------------------------------------------------------------------------
// Policies
// ---------------------------------------------------------------------------

json policy_to_json(const DecisionPolicy& policy) {
  json j;
  switch (policy.kind()) {
    case DecisionPolicy::Kind::Threshold:
      j["kind"] = "threshold";
      j["t"] = policy.threshold_params().t;
      break;
    case DecisionPolicy::Kind::Logistic:
      j["kind"] = "logistic";
      j["t"] = policy.logistic_params().t;
      j["lambda"] = policy.logistic_params().lambda;
      break;
    case DecisionPolicy::Kind::BetaCdf:
      j["kind"] = "betacdf";
      j["t"] = policy.beta_cdf_params().t;
      j["sigma2"] = policy.beta_cdf_params().sigma2;
      break;
    case DecisionPolicy::Kind::StepFunction:
      j["kind"] = "step";
      j["breakpoints"] = policy.step_params().breakpoints;
      j["levels"] = policy.step_params().levels;
      break;
  }
  return j;
}

DecisionPolicy policy_from_json(const json& j) {
  const std::string kind = need_string(j, "kind");
  if (kind == "threshold") return DecisionPolicy::threshold(need_number(j, "t"));
  if (kind == "logistic")
    return DecisionPolicy::logistic(need_number(j, "t"), need_number(j, "lambda"));
  if (kind == "betacdf")
    return DecisionPolicy::beta_cdf(need_number(j, "t"), need_number(j, "sigma2"));
  if (kind == "step")
    return DecisionPolicy::step_function(need_array(j, "breakpoints"), need_array(j, "levels"));
  throw ValueError("unknown policy kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

json distribution_to_json(const RiskDistribution& dist) {
  json j;
  switch (dist.kind()) {
    case RiskDistribution::Kind::Beta:
      j["kind"] = "beta";
      j["alpha"] = dist.beta_params().alpha;
      j["beta"] = dist.beta_params().beta;
      break;
    case RiskDistribution::Kind::Normal:
      j["kind"] = "normal";
      j["mean"] = dist.normal_params().mean;
      j["variance"] = dist.normal_params().variance;
      break;
    case RiskDistribution::Kind::Gamma:
      j["kind"] = "gamma";
      j["shape"] = dist.gamma_params().shape;
      j["rate"] = dist.gamma_params().rate;
      break;
    case RiskDistribution::Kind::Binomial:
      j["kind"] = "binomial";
      j["trials"] = dist.binomial_params().trials;
      j["p"] = dist.binomial_params().p;
      break;
    case RiskDistribution::Kind::Discrete:
    case RiskDistribution::Kind::Empirical: {
      j["kind"] = dist.kind() == RiskDistribution::Kind::Discrete ? "discrete" : "empirical";
      std::vector<double> values, masses;
      for (const auto& a : dist.atoms()) {
        values.push_back(a.value);
        masses.push_back(a.mass);
      }
      if (dist.kind() == RiskDistribution::Kind::Discrete) {
        j["values"] = values;
        j["masses"] = masses;
      } else {
        j["samples"] = values;
        j["weights"] = masses;
      }
      break;
    }
    case RiskDistribution::Kind::Transformed: {
      const auto& p = dist.transformed_params();
      j["kind"] = "transformed";
      j["base"] = distribution_to_json(*p.base);
      json map;
      switch (p.map.kind()) {
        case MonotoneTransform::Kind::Log:
          map["kind"] = "log";
          break;
        case MonotoneTransform::Kind::Logit:
          map["kind"] = "logit";
          break;
        case MonotoneTransform::Kind::Affine:
          map["kind"] = "affine";
          map["scale"] = p.map.scale();
          map["shift"] = p.map.shift();
          break;
      }
      j["map"] = std::move(map);
      break;
    }
    case RiskDistribution::Kind::Tilted:
      throw Error("tilted distributions carry a function handle and cannot be serialized");
  }
  return j;
}

RiskDistribution distribution_from_json(const json& j) {
  const std::string kind = need_string(j, "kind");
  if (kind == "beta")
    return RiskDistribution::beta(need_number(j, "alpha"), need_number(j, "beta"));
  if (kind == "normal")
    return RiskDistribution::normal(need_number(j, "mean"), need_number(j, "variance"));
  if (kind == "gamma")
    return RiskDistribution::gamma(need_number(j, "shape"), need_number(j, "rate"));
  if (kind == "binomial")
    return RiskDistribution::binomial(static_cast<int>(need_number(j, "trials")),
                                      need_number(j, "p"));
  if (kind == "discrete")
    return RiskDistribution::discrete(need_array(j, "values"), need_array(j, "masses"));
  if (kind == "empirical") {
    std::vector<double> weights;
    if (j.contains("weights")) weights = need_array(j, "weights");
    return RiskDistribution::empirical(need_array(j, "samples"), std::move(weights));
  }
  if (kind == "transformed") {
    if (!j.contains("base") || !j.contains("map")) throw ValueError("transformed needs base and map");
    RiskDistribution base = distribution_from_json(j["base"]);
    const json& m = j["map"];
    const std::string mk = need_string(m, "kind");
    if (mk == "log") return RiskDistribution::transformed(std::move(base), MonotoneTransform::log());
    if (mk == "logit")
      return RiskDistribution::transformed(std::move(base), MonotoneTransform::logit());
    if (mk == "affine")
      return RiskDistribution::transformed(
          std::move(base),
          MonotoneTransform::affine(need_number(m, "scale"), need_number(m, "shift")));
    throw ValueError("unknown transform kind '" + mk + "'");
  }
  throw ValueError("unknown distribution kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Generator specs and instances
// ---------------------------------------------------------------------------

json generator_spec_to_json(const GeneratorSpec& spec) {
  json j;
  j["dist0"] = distribution_to_json(spec.dist0);
  j["dist1"] = distribution_to_json(spec.dist1);
  j["group_share"] = spec.group_share;
  j["policy0"] = policy_to_json(spec.policy0);
  j["policy1"] = policy_to_json(spec.policy1);
  j["n_total"] = spec.n_total;
  j["outcome_model"] =
      spec.outcome_model == OutcomeModel::BernoulliOfRisk ? "bernoulli" : "identity";
  j["seed"] = spec.seed;
  return j;
}

GeneratorSpec generator_spec_from_json(const json& j) {
  for (const char* key : {"dist0", "dist1", "policy0", "policy1"})
    if (!j.contains(key)) throw ValueError(std::string("generator spec needs '") + key + "'");
  const std::string model = j.value("outcome_model", std::string("bernoulli"));
  if (model != "bernoulli" && model != "identity")
    throw ValueError("outcome_model must be bernoulli|identity");
  return GeneratorSpec{distribution_from_json(j["dist0"]),
                       distribution_from_json(j["dist1"]),
                       need_number(j, "group_share"),
                       policy_from_json(j["policy0"]),
                       policy_from_json(j["policy1"]),
                       static_cast<std::size_t>(need_number(j, "n_total")),
                       model == "bernoulli" ? OutcomeModel::BernoulliOfRisk
                                            : OutcomeModel::IdentityUtility,
                       j.value("seed", std::uint64_t{0})};
}

json instance_to_json(const DiscreteInstance& instance) {
  json j;
  json a0 = json::array(), a1 = json::array();
  for (const auto& a : instance.atoms0) a0.push_back({a.value, a.mass});
  for (const auto& a : instance.atoms1) a1.push_back({a.value, a.mass});
  j["atoms0"] = std::move(a0);
  j["atoms1"] = std::move(a1);
  j["group_share"] = instance.group_share;
  j["threshold0"] = instance.threshold0;
  j["threshold1"] = instance.threshold1;
  return j;
}

DiscreteInstance instance_from_json(const json& j) {
  DiscreteInstance instance;
  for (const char* key : {"atoms0", "atoms1"}) {
    if (!j.contains(key) || !j[key].is_array())
      throw ValueError(std::string("instance needs atom array '") + key + "'");
    auto& target = std::string(key) == "atoms0" ? instance.atoms0 : instance.atoms1;
    for (const auto& pair : j[key]) {
      if (!pair.is_array() || pair.size() != 2) throw ValueError("atoms must be [value, mass] pairs");
      target.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
  }
  instance.group_share = need_number(j, "group_share");
  instance.threshold0 = need_number(j, "threshold0");
  instance.threshold1 = need_number(j, "threshold1");
  return instance;
}

json verdict_to_json(const Verdict& verdict) {
  json j;
  j["test"] = to_string(verdict.test);
  j["conclusion"] = to_string(verdict.conclusion);
  j["discrimination_against"] = to_string(verdict.discrimination_against);
  j["mode"] = verdict.alpha ? "significance" : "point";
  if (verdict.alpha) j["alpha"] = *verdict.alpha;
  j["p_value"] = verdict.p_value ? json(*verdict.p_value) : json();
  return j;
}

// ---------------------------------------------------------------------------
// Simulation configs
// ---------------------------------------------------------------------------

SimulationConfig simulation_config_from_json(const json& j) {
  SimulationConfig config;
  if (!j.contains("dist0") || !j.contains("dist1"))
    throw ValueError("simulation config needs dist0 and dist1");
  config.population = RiskPopulation::from_distributions(
      distribution_from_json(j["dist0"]), distribution_from_json(j["dist1"]),
      j.value("group_share", 0.5));
  config.family = policy_family_from_string(j.value("family", std::string("threshold")));
  if (j.contains("sigma2")) config.sigma2 = need_number(j, "sigma2");
  if (j.contains("percentiles")) {
    for (const auto& p : j["percentiles"]) config.percentiles.push_back(p.get<int>());
  }
  config.polarity = polarity_from_string(j.value("polarity", std::string("desirable")));
  config.seed = j.value("seed", std::uint64_t{0});
  config.per_group_percentiles = j.value("per_group_percentiles", false);
  return config;
}

json simulation_config_to_json(const SimulationConfig& config) {
  if (config.population.sample_source())
    throw Error("sample-sourced simulation configs are not serializable");
  json j;
  j["dist0"] = distribution_to_json(*config.population.dist0);
  j["dist1"] = distribution_to_json(*config.population.dist1);
  j["group_share"] = config.population.group_share;
  j["family"] = to_string(config.family);
  if (config.sigma2) j["sigma2"] = *config.sigma2;
  if (!config.percentiles.empty()) j["percentiles"] = config.percentiles;
  j["polarity"] = to_string(config.polarity);
  j["seed"] = config.seed;
  if (config.per_group_percentiles) j["per_group_percentiles"] = true;
  return j;
}

}  // namespace rotest
