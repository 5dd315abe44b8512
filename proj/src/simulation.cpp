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

#include "rotest/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rotest/estimation.hpp"
#include "rotest/parallel.hpp"
#include "rotest/random.hpp"

namespace rotest {

std::string to_string(PolicyFamily f) {
  return f == PolicyFamily::Threshold ? "threshold" : "betacdf";
}

PolicyFamily policy_family_from_string(const std::string& s) {
  if (s == "threshold") return PolicyFamily::Threshold;
  if (s == "betacdf") return PolicyFamily::BetaCdf;
  throw ValueError("unknown policy family '" + s + "' (expected threshold|betacdf)");
}

std::string to_string(TrueOrdering t) {
  switch (t) {
    case TrueOrdering::Group1Higher:
      return "t1_higher";
    case TrueOrdering::Group0Higher:
      return "t0_higher";
    case TrueOrdering::Equal:
      return "equal";
  }
  return "?";
}

RiskPopulation RiskPopulation::from_distributions(RiskDistribution d0, RiskDistribution d1,
                                                  double share) {
  if (!(share > 0.0 && share < 1.0))
    throw Error("risk population group share must lie strictly inside (0, 1)");
  RiskPopulation p;
  p.dist0 = std::move(d0);
  p.dist1 = std::move(d1);
  p.group_share = share;
  return p;
}

RiskPopulation RiskPopulation::from_sample(GroupedSample s) {
  if (!s.has_all_risks())
    throw MissingRiskScores("sampled risk population requires a risk score on every row");
  if (s.count(0) == 0 || s.count(1) == 0)
    throw Error("risk population sample needs rows in both groups");
  RiskPopulation p;
  p.sample = std::move(s);
  return p;
}

// ---------------------------------------------------------------------------
// Rates under a policy
// ---------------------------------------------------------------------------

std::pair<double, double> rates_under_policy(
    const std::vector<std::pair<double, double>>& risks, const DecisionPolicy& policy) {
  double total = 0.0, decided = 0.0, outcome = 0.0;
  for (const auto& [value, weight] : risks) {
    if (!(weight >= 0.0)) throw Error("rates_under_policy: weights must be >= 0");
    const double d = apply(policy, value);
    total += weight;
    decided += weight * d;
    outcome += weight * d * value;
  }
  if (!(total > 0.0)) throw Error("rates_under_policy: total weight must be positive");
  if (!(decided > 0.0)) throw ZeroDecisionMass("no decision mass under the policy");
  return {decided / total, outcome / decided};
}

std::pair<double, double> rates_under_policy(const RiskDistribution& dist,
                                             const DecisionPolicy& policy) {
  if (dist.atomic()) {
    std::vector<std::pair<double, double>> risks;
    risks.reserve(dist.atoms().size());
    for (const auto& a : dist.atoms()) risks.emplace_back(a.value, a.mass);
    return rates_under_policy(risks, policy);
  }

  if (policy.kind() == DecisionPolicy::Kind::Threshold) {
    const double t = policy.threshold_params().t;
    const double dr = tail_mass(dist, t);
    if (!(dr > 0.0)) throw ZeroDecisionMass("no decision mass under the policy");
    try {
      return {dr, conditional_mean_above(dist, t)};
    } catch (const ZeroMassAboveThreshold&) {
      throw ZeroDecisionMass("no decision mass under the policy");
    }
  }

  const double lo = std::isfinite(dist.support_lo()) ? dist.support_lo() : quantile(dist, 1e-12);
  const double hi = std::isfinite(dist.support_hi()) ? dist.support_hi()
                                                     : quantile(dist, 1.0 - 1e-12);
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  const double decided = integrator.integrate(
      [&](double x) { return apply(policy, x) * density(dist, x); }, lo, hi);
  if (!(decided > 1e-300)) throw ZeroDecisionMass("no decision mass under the policy");
  const double outcome = integrator.integrate(
      [&](double x) { return x * apply(policy, x) * density(dist, x); }, lo, hi);
  return {decided, outcome / decided};
}

// ---------------------------------------------------------------------------
// Percentile thresholds
// ---------------------------------------------------------------------------

namespace {

// left-continuous empirical quantile: smallest value with F-hat >= q
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const auto n = static_cast<double>(sorted.size());
  auto idx = static_cast<std::size_t>(std::ceil(q * n));
  if (idx > 0) --idx;
  idx = std::min(idx, sorted.size() - 1);
  return sorted[idx];
}

// smallest x with the pooled mixture CDF >= q
double mixture_quantile(const RiskDistribution& d0, const RiskDistribution& d1, double share,
                        double q) {
  const auto mix_cdf = [&](double x) {
    return (1.0 - share) * cdf(d0, x) + share * cdf(d1, x);
  };
  if (d0.atomic() && d1.atomic()) {
    std::vector<double> values;
    for (const auto& a : d0.atoms()) values.push_back(a.value);
    for (const auto& a : d1.atoms()) values.push_back(a.value);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (double v : values)
      if (mix_cdf(v) >= q) return v;
    return values.back();
  }
  double lo = std::min(std::isfinite(d0.support_lo()) ? d0.support_lo() : quantile(d0, 1e-12),
                       std::isfinite(d1.support_lo()) ? d1.support_lo() : quantile(d1, 1e-12));
  double hi = std::max(std::isfinite(d0.support_hi()) ? d0.support_hi()
                                                      : quantile(d0, 1.0 - 1e-12),
                       std::isfinite(d1.support_hi()) ? d1.support_hi()
                                                      : quantile(d1, 1.0 - 1e-12));
  for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mix_cdf(mid) >= q)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double pooled_variance(const RiskPopulation& pop) {
  if (pop.sample_source()) {
    double sum = 0.0, n = 0.0;
    for (const auto& r : pop.sample->rows) {
      sum += *r.risk;
      n += 1.0;
    }
    const double m = sum / n;
    double v = 0.0;
    for (const auto& r : pop.sample->rows) v += (*r.risk - m) * (*r.risk - m);
    return v / n;
  }
  const double p = pop.group_share;
  const double m0 = mean(*pop.dist0), m1 = mean(*pop.dist1);
  const double mix_mean = (1.0 - p) * m0 + p * m1;
  const double second =
      (1.0 - p) * (variance(*pop.dist0) + m0 * m0) + p * (variance(*pop.dist1) + m1 * m1);
  return second - mix_mean * mix_mean;
}

}  // namespace

bool wrong_direction(Conclusion conclusion, TrueOrdering truth) {
  switch (conclusion) {
    case Conclusion::Inconclusive:
      return false;
    case Conclusion::HigherThresholdForGroup1:
      return truth != TrueOrdering::Group1Higher;
    case Conclusion::HigherThresholdForGroup0:
      return truth != TrueOrdering::Group0Higher;
  }
  return false;
}

SimulationGrid sweep(const SimulationConfig& config) {
  const RiskPopulation& pop = config.population;
  if (!pop.sample_source() && (!pop.dist0 || !pop.dist1))
    throw Error("sweep: population needs either a sample or two distributions");

  std::vector<int> percentiles = config.percentiles;
  if (percentiles.empty()) {
    percentiles.resize(99);
    for (int i = 0; i < 99; ++i) percentiles[i] = i + 1;
  }
  for (int p : percentiles)
    if (p <= 0 || p >= 100)
      throw Error("sweep: percentiles must exclude 0 and 100");

  // per-group risk atom lists for the sample source
  std::vector<std::pair<double, double>> risks0, risks1;
  std::vector<double> pooled_sorted, sorted0, sorted1;
  if (pop.sample_source()) {
    for (const auto& r : pop.sample->rows) {
      (r.group == 1 ? risks1 : risks0).emplace_back(*r.risk, 1.0);
      pooled_sorted.push_back(*r.risk);
      (r.group == 1 ? sorted1 : sorted0).push_back(*r.risk);
    }
    std::sort(pooled_sorted.begin(), pooled_sorted.end());
    std::sort(sorted0.begin(), sorted0.end());
    std::sort(sorted1.begin(), sorted1.end());
  }

  const auto threshold_for = [&](int percentile, int group) {
    const double q = static_cast<double>(percentile) / 100.0;
    if (pop.sample_source()) {
      if (!config.per_group_percentiles) return sorted_quantile(pooled_sorted, q);
      return sorted_quantile(group == 0 ? sorted0 : sorted1, q);
    }
    if (!config.per_group_percentiles)
      return mixture_quantile(*pop.dist0, *pop.dist1, pop.group_share, q);
    return quantile(group == 0 ? *pop.dist0 : *pop.dist1, q);
  };

  double sigma2 = 0.0;
  if (config.family == PolicyFamily::BetaCdf) {
    if (config.sigma2) {
      sigma2 = *config.sigma2;
      if (!(sigma2 > 0.0)) throw Error("sweep: sigma2 must be positive");
    } else {
      const double sd = std::sqrt(pooled_variance(pop));
      sigma2 = 0.25 * sd * sd;  // sigma = half the pooled standard deviation
    }
  }

  const std::size_t m = percentiles.size();
  std::vector<double> t0(m), t1(m);
  for (std::size_t i = 0; i < m; ++i) {
    t0[i] = threshold_for(percentiles[i], 0);
    t1[i] = threshold_for(percentiles[i], 1);
  }

  const auto make_policy = [&](double t) -> std::optional<DecisionPolicy> {
    if (config.family == PolicyFamily::Threshold) return DecisionPolicy::threshold(t);
    if (!(t > 0.0 && t < 1.0 && sigma2 < t * (1.0 - t))) return std::nullopt;
    return DecisionPolicy::beta_cdf(t, sigma2);
  };

  SimulationGrid grid;
  grid.percentiles = percentiles;
  grid.cells.resize(m * m);

  parallel_for(
      m * m,
      [&](std::size_t idx) {
        const std::size_t i = idx / m, j = idx % m;
        GridCell cell;
        cell.percentile_g0 = percentiles[i];
        cell.percentile_g1 = percentiles[j];
        cell.t_g0 = t0[i];
        cell.t_g1 = t1[j];
        cell.truth = cell.t_g1 > cell.t_g0
                         ? TrueOrdering::Group1Higher
                         : (cell.t_g0 > cell.t_g1 ? TrueOrdering::Group0Higher
                                                  : TrueOrdering::Equal);

        const auto policy0 = make_policy(cell.t_g0);
        const auto policy1 = make_policy(cell.t_g1);
        if (!policy0 || !policy1) {
          cell.degenerate = true;
          grid.cells[idx] = cell;
          return;
        }
        try {
          const auto [dr0, or0] = pop.sample_source()
                                      ? rates_under_policy(risks0, *policy0)
                                      : rates_under_policy(*pop.dist0, *policy0);
          const auto [dr1, or1] = pop.sample_source()
                                      ? rates_under_policy(risks1, *policy1)
                                      : rates_under_policy(*pop.dist1, *policy1);
          cell.delta_dr = dr1 - dr0;
          cell.delta_or = or1 - or0;
          const DeltaEstimates delta{cell.delta_dr, cell.delta_or, 0.0, 0.0};
          cell.robust = robust_outcome_test(delta, config.polarity).conclusion;
          cell.standard = standard_outcome_test(delta, config.polarity).conclusion;
          cell.benchmark = benchmark_test(delta, config.polarity).conclusion;
        } catch (const ZeroDecisionMass&) {
          cell.degenerate = true;
        }
        grid.cells[idx] = cell;
      },
      config.threads);

  return grid;
}

void write_grid_csv(const SimulationGrid& grid, std::ostream& out) {
  out << "percentile_g0,percentile_g1,t_g0,t_g1,delta_dr,delta_or,robust,standard,benchmark,"
         "truth\n";
  char buf[64];
  const auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  for (const auto& cell : grid.cells) {
    out << cell.percentile_g0 << ',' << cell.percentile_g1 << ',' << fmt(cell.t_g0) << ','
        << fmt(cell.t_g1) << ',';
    if (cell.degenerate)
      out << ",,degenerate,degenerate,degenerate,";
    else
      out << fmt(cell.delta_dr) << ',' << fmt(cell.delta_or) << ',' << to_string(cell.robust)
          << ',' << to_string(cell.standard) << ',' << to_string(cell.benchmark) << ',';
    out << to_string(cell.truth) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

// Bins both distributions onto a common support (pooled-quantile bins), which
// preserves the MLRP of the continuous pair exactly on the atoms. Returns the
// two binned distributions.
std::pair<RiskDistribution, RiskDistribution> binned_pair(const RiskDistribution& d0,
                                                          const RiskDistribution& d1,
                                                          double share, std::size_t bins) {
  std::vector<double> values(bins), m0(bins), m1(bins);
  double prev_b = -std::numeric_limits<double>::infinity();
  double prev_f0 = 0.0, prev_f1 = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double mid_q = (static_cast<double>(i) + 0.5) / static_cast<double>(bins);
    values[i] = mixture_quantile(d0, d1, share, mid_q);
    const bool last = (i + 1 == bins);
    const double b =
        last ? std::numeric_limits<double>::infinity()
             : mixture_quantile(d0, d1, share, (static_cast<double>(i) + 1.0) /
                                                   static_cast<double>(bins));
    const double f0 = last ? 1.0 : cdf(d0, b);
    const double f1 = last ? 1.0 : cdf(d1, b);
    m0[i] = std::max(0.0, f0 - prev_f0);
    m1[i] = std::max(0.0, f1 - prev_f1);
    prev_b = b;
    prev_f0 = f0;
    prev_f1 = f1;
  }
  (void)prev_b;
  // merge any midpoint ties from float rounding
  std::vector<double> v2, a0, a1;
  for (std::size_t i = 0; i < bins; ++i) {
    if (!v2.empty() && values[i] == v2.back()) {
      a0.back() += m0[i];
      a1.back() += m1[i];
    } else {
      v2.push_back(values[i]);
      a0.push_back(m0[i]);
      a1.push_back(m1[i]);
    }
  }
  return {RiskDistribution::discrete(v2, a0), RiskDistribution::discrete(v2, a1)};
}

RiskDistribution perturbed_masses(const RiskDistribution& dist, double relative,
                                  std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 7);
  std::vector<double> values, masses;
  for (const auto& a : dist.atoms()) {
    values.push_back(a.value);
    masses.push_back(a.mass * (1.0 + rng.uniform(-relative, relative)));
  }
  return RiskDistribution::discrete(std::move(values), std::move(masses));
}

}  // namespace

SimulationConfig preset(const std::string& name) {
  SimulationConfig config;
  config.seed = 7151;
  if (name == "beta-similar" || name == "beta-similar-betacdf") {
    config.population = RiskPopulation::from_distributions(RiskDistribution::beta(6.0, 6.0),
                                                           RiskDistribution::beta(7.0, 5.0), 0.5);
    if (name == "beta-similar-betacdf") config.family = PolicyFamily::BetaCdf;
    return config;
  }
  if (name == "beta-gap") {
    config.population = RiskPopulation::from_distributions(RiskDistribution::beta(2.0, 8.0),
                                                           RiskDistribution::beta(5.0, 5.0), 0.5);
    return config;
  }
  if (name == "beta-gap-perturbed") {
    auto [d0, d1] = binned_pair(RiskDistribution::beta(2.0, 8.0), RiskDistribution::beta(5.0, 5.0),
                                0.5, 300);
    config.population = RiskPopulation::from_distributions(
        std::move(d0), perturbed_masses(d1, 0.10, config.seed), 0.5);
    return config;
  }
  throw ValueError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"beta-similar", "beta-gap", "beta-gap-perturbed", "beta-similar-betacdf"};
}

}  // namespace rotest
