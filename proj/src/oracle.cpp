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

#include "rotest/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace rotest {

namespace {

double total_mass(const std::vector<Atom>& atoms) {
  double m = 0.0;
  for (const auto& a : atoms) m += a.mass;
  return m;
}

// decision rate and outcome rate for one group's atoms under a threshold
std::pair<double, double> group_rates(const std::vector<Atom>& atoms, double t) {
  double total = 0.0, surviving = 0.0, outcome = 0.0;
  std::size_t surviving_count = 0;
  double sole_value = 0.0;
  for (const auto& a : atoms) {
    total += a.mass;
    if (a.value >= t && a.mass > 0.0) {
      surviving += a.mass;
      outcome += a.value * a.mass;
      ++surviving_count;
      sole_value = a.value;
    }
  }
  if (surviving <= 0.0)
    throw InvalidInstance("no mass at or above the threshold for one group");
  // a single surviving atom pins the outcome rate exactly; dividing the
  // rounded product back out would smear it by an ulp
  const double outcome_rate = surviving_count == 1 ? sole_value : outcome / surviving;
  return {surviving / total, outcome_rate};
}

}  // namespace

void validate_instance(const DiscreteInstance& instance) {
  if (instance.atoms0.empty() || instance.atoms1.empty())
    throw InvalidInstance("both groups need at least one atom");
  if (!(instance.group_share > 0.0 && instance.group_share < 1.0))
    throw InvalidInstance("group share must lie strictly inside (0, 1)");
  for (const auto* atoms : {&instance.atoms0, &instance.atoms1}) {
    for (const auto& a : *atoms)
      if (!(a.mass >= 0.0) || !std::isfinite(a.mass) || !std::isfinite(a.value))
        throw InvalidInstance("atom values and masses must be finite, masses >= 0");
    if (!(total_mass(*atoms) > 0.0)) throw InvalidInstance("atom masses must have positive total");
  }
  bool above0 = false, above1 = false;
  for (const auto& a : instance.atoms0) above0 |= (a.value >= instance.threshold0 && a.mass > 0.0);
  for (const auto& a : instance.atoms1) above1 |= (a.value >= instance.threshold1 && a.mass > 0.0);
  if (!above0 || !above1)
    throw InvalidInstance("each group needs an atom at or above its threshold");
}

ExactRates exact_rates(const DiscreteInstance& instance) {
  validate_instance(instance);
  ExactRates r;
  std::tie(r.dr0, r.or0) = group_rates(instance.atoms0, instance.threshold0);
  std::tie(r.dr1, r.or1) = group_rates(instance.atoms1, instance.threshold1);
  return r;
}

PropositionCheck verify_proposition(const DiscreteInstance& instance) {
  PropositionCheck check;
  check.rates = exact_rates(instance);
  check.premises_hold = check.rates.dr0 > check.rates.dr1 && check.rates.or1 > check.rates.or0;
  // premises imply t0 < t1; anything else is a violation
  check.consistent = !(check.premises_hold && instance.threshold0 >= instance.threshold1);
  return check;
}

namespace {

// all length-k index combinations from [0, n)
void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

// all compositions of `total` into k positive parts, lexicographically
void for_each_composition(int total, int k,
                          const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> parts(k);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == k - 1) {
      if (remaining >= 1) {
        parts[pos] = remaining;
        fn(parts);
      }
      return;
    }
    for (int v = 1; remaining - v >= k - pos - 1; ++v) {
      parts[pos] = v;
      rec(pos + 1, remaining - v);
    }
  };
  rec(0, total);
}

}  // namespace

DiscreteInstance find_fig2_counterexample(const CounterexampleSearchSpace& space) {
  if (space.atom_count < 2) throw Error("counterexample search needs atom_count >= 2");
  if (static_cast<int>(space.risk_grid.size()) < space.atom_count)
    throw Error("risk grid smaller than atom_count");
  if (space.mass_steps < space.atom_count)
    throw Error("mass_steps must allow positive mass on every atom");

  std::vector<std::vector<int>> compositions;
  for_each_composition(space.mass_steps, space.atom_count,
                       [&](const std::vector<int>& parts) { compositions.push_back(parts); });
  std::sort(compositions.begin(), compositions.end());
  compositions.erase(std::unique(compositions.begin(), compositions.end()), compositions.end());

  DiscreteInstance found;
  bool have = false;

  for_each_combination(
      static_cast<int>(space.risk_grid.size()), space.atom_count,
      [&](const std::vector<int>& support_idx) {
        if (have) return;
        std::vector<double> support(support_idx.size());
        for (std::size_t i = 0; i < support_idx.size(); ++i)
          support[i] = space.risk_grid[static_cast<std::size_t>(support_idx[i])];

        for (const auto& m0 : compositions) {
          for (const auto& m1 : compositions) {
            if (have) return;
            if (m0 == m1) continue;  // identical groups can never show the pattern

            std::vector<double> mass0(m0.size()), mass1(m1.size());
            const double steps = static_cast<double>(space.mass_steps);
            for (std::size_t i = 0; i < m0.size(); ++i) {
              mass0[i] = static_cast<double>(m0[i]) / steps;
              mass1[i] = static_cast<double>(m1[i]) / steps;
            }

            const RiskDistribution d0 = RiskDistribution::discrete(support, mass0);
            const RiskDistribution d1 = RiskDistribution::discrete(support, mass1);
            const Ordering mlrp = check_ordering(d0, d1).mlrp;
            const bool mlrp_holds = mlrp != Ordering::Neither;
            if (space.restrict_to_mlrp != mlrp_holds) continue;

            for (std::size_t cut = 0; cut + 1 < support.size(); ++cut) {
              const double t = 0.5 * (support[cut] + support[cut + 1]);
              DiscreteInstance candidate;
              for (std::size_t i = 0; i < support.size(); ++i) {
                candidate.atoms0.push_back({support[i], mass0[i]});
                candidate.atoms1.push_back({support[i], mass1[i]});
              }
              candidate.group_share = 0.5;
              candidate.threshold0 = t;
              candidate.threshold1 = t;
              const ExactRates r = exact_rates(candidate);
              // strict inequalities with a margin far above rounding noise:
              // proportional surviving masses make the outcome rates equal up
              // to an ulp, which must not count as the pattern
              if (r.dr1 < r.dr0 - 1e-9 && r.or1 > r.or0 + 1e-9) {
                found = candidate;
                have = true;
                return;
              }
            }
          }
        }
      });

  if (!have)
    throw NotFound(space.restrict_to_mlrp
                       ? "no counterexample exists among MLRP-ordered pairs"
                       : "no counterexample found in the given search space");
  return found;
}

DiscreteInstance random_mlrp_instance(Rng& rng) {
  const std::size_t n_atoms = 2 + rng.index(7);  // 2..8 shared support points

  std::vector<double> support(n_atoms);
  double running = rng.uniform(0.01, 0.2);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    support[i] = running;
    running += rng.uniform(0.02, 0.25);
  }

  std::vector<double> mass_a(n_atoms), mass_b(n_atoms);
  double weight = rng.uniform(0.05, 1.0);  // non-decreasing tilt weight
  for (std::size_t i = 0; i < n_atoms; ++i) {
    mass_a[i] = rng.uniform(0.05, 1.0);
    weight += rng.uniform(0.0, 1.0);
    mass_b[i] = mass_a[i] * weight;
  }

  // mass_b / mass_a is non-decreasing, so b's atoms dominate a's in the
  // likelihood-ratio order; randomize which group gets the dominant side
  DiscreteInstance instance;
  const bool b_is_group1 = rng.bernoulli(0.5);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    const Atom atom_a{support[i], mass_a[i]};
    const Atom atom_b{support[i], mass_b[i]};
    instance.atoms0.push_back(b_is_group1 ? atom_a : atom_b);
    instance.atoms1.push_back(b_is_group1 ? atom_b : atom_a);
  }
  // normalize so downstream consumers see probability masses
  for (auto* atoms : {&instance.atoms0, &instance.atoms1}) {
    double total = 0.0;
    for (const auto& a : *atoms) total += a.mass;
    for (auto& a : *atoms) a.mass /= total;
  }
  instance.group_share = rng.uniform(0.1, 0.9);
  // any threshold at or below the top atom keeps decision mass positive
  instance.threshold0 = rng.uniform(support.front() - 0.05, support.back());
  instance.threshold1 = rng.uniform(support.front() - 0.05, support.back());
  return instance;
}

GroupedSample instance_to_sample(const DiscreteInstance& instance, std::size_t scale) {
  validate_instance(instance);
  GroupedSample sample;
  const double norm0 = total_mass(instance.atoms0);
  const double norm1 = total_mass(instance.atoms1);
  for (int g = 0; g <= 1; ++g) {
    const auto& atoms = g == 0 ? instance.atoms0 : instance.atoms1;
    const double norm = g == 0 ? norm0 : norm1;
    const double t = g == 0 ? instance.threshold0 : instance.threshold1;
    for (const auto& a : atoms) {
      const double exact = a.mass / norm * static_cast<double>(scale);
      const auto count = static_cast<std::size_t>(std::llround(exact));
      if (std::abs(exact - static_cast<double>(count)) > 1e-6)
        throw Error("instance masses are not multiples of 1/scale");
      for (std::size_t i = 0; i < count; ++i) {
        SampleRow row;
        row.group = g;
        row.decision = a.value >= t ? 1 : 0;
        if (row.decision == 1) row.outcome = a.value;
        row.risk = a.value;
        sample.rows.push_back(row);
      }
    }
  }
  return sample;
}

}  // namespace rotest
