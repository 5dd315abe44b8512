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

#ifndef ROTEST_ORACLE_HPP
#define ROTEST_ORACLE_HPP

#include <cstddef>
#include <vector>

#include "rotest/distributions.hpp"
#include "rotest/random.hpp"
#include "rotest/sample.hpp"

namespace rotest {

/// A small two-group world with discrete risk atoms and threshold decisions;
/// everything about it can be computed exactly by enumeration.
struct DiscreteInstance {
  std::vector<Atom> atoms0, atoms1;
  double group_share = 0.5;  // Pr(G = 1)
  double threshold0 = 0.0, threshold1 = 0.0;
};

/// Throws InvalidInstance when masses are degenerate, the group share is not
/// in (0, 1), or a group has no atom at/above its threshold.
void validate_instance(const DiscreteInstance& instance);

struct ExactRates {
  double dr0 = 0.0, dr1 = 0.0;
  double or0 = 0.0, or1 = 0.0;
};

/// Decision and outcome rates by direct atom enumeration.
ExactRates exact_rates(const DiscreteInstance& instance);

struct PropositionCheck {
  bool consistent = true;       // false only on a genuine violation
  bool premises_hold = false;   // lower group-1 decision rate, higher outcome rate
  ExactRates rates;
};

/// Checks the threshold-ordering implication on one instance: a violation is
/// reported iff both rate premises hold while t0 >= t1. Callers are expected
/// to feed MLRP-ordered atom pairs; violations then never occur.
PropositionCheck verify_proposition(const DiscreteInstance& instance);

/// Exhaustive search space for inframarginality counterexamples: both groups
/// share atom_count support points drawn from risk_grid, masses run over all
/// positive multiples of 1/mass_steps, and the uniform threshold runs over
/// midpoints between consecutive support points.
struct CounterexampleSearchSpace {
  std::vector<double> risk_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int atom_count = 3;
  int mass_steps = 10;
  bool restrict_to_mlrp = false;  // search only MLRP-ordered pairs (expected to fail)
};

/// First instance (in deterministic scan order) with a uniform threshold
/// where group 1 has a strictly lower decision rate and strictly higher
/// outcome rate while the atom pair fails the MLRP check — the sign pattern
/// on which the robust test misfires. Throws NotFound when the space has no
/// such instance (in particular when restricted to MLRP pairs).
DiscreteInstance find_fig2_counterexample(const CounterexampleSearchSpace& space);

/// Expands the instance into unit-level rows (outcome = the risk value,
/// decision = threshold indicator), with per-atom row counts mass * scale.
/// Masses must be rational with denominator dividing scale.
GroupedSample instance_to_sample(const DiscreteInstance& instance, std::size_t scale);

/// A random instance whose atom pair satisfies the MLRP by construction: the
/// two groups share a support, one group's masses are a tilt of the other's
/// by a non-decreasing positive weight, and each threshold keeps positive
/// decision mass. Used by the randomized proposition audits.
DiscreteInstance random_mlrp_instance(Rng& rng);

}  // namespace rotest

#endif  // ROTEST_ORACLE_HPP
