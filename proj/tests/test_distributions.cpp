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

#include <cmath>
#include <limits>

#include <doctest.h>

#include "rotest/distributions.hpp"
#include "test_support.hpp"

using namespace rotest;
using namespace rotest::testing;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("distributions") {
  TEST_CASE("cdf basics") {
    const auto two_atoms = RiskDistribution::discrete({0.2, 0.8}, {0.5, 0.5});
    CHECK(cdf(two_atoms, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cdf(two_atoms, 0.2) == doctest::Approx(0.5).epsilon(1e-12));  // right-continuous
    CHECK(cdf(two_atoms, 0.1) == 0.0);
    CHECK(cdf(two_atoms, 0.9) == 1.0);

    CHECK(cdf(RiskDistribution::normal(0.0, 1.0), 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cdf(RiskDistribution::beta(1.0, 1.0), 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  }

  TEST_CASE("cdf is non-decreasing with limits 0 and 1") {
    const auto dists = {RiskDistribution::beta(2.0, 5.0), RiskDistribution::normal(0.3, 2.0),
                        RiskDistribution::gamma(1.5, 2.0), RiskDistribution::binomial(7, 0.4)};
    for (const auto& d : dists) {
      CHECK(cdf(d, -kInf) == 0.0);
      CHECK(cdf(d, kInf) == 1.0);
      double prev = -1.0;
      for (int i = 0; i <= 100; ++i) {
        const double x = -3.0 + 0.12 * i;
        const double f = cdf(d, x);
        CHECK(f >= prev);
        prev = f;
      }
    }
  }

  TEST_CASE("conditional_mean_above") {
    const auto two_atoms = RiskDistribution::discrete({0.2, 0.8}, {0.5, 0.5});
    CHECK(conditional_mean_above(two_atoms, 0.5) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(conditional_mean_above(two_atoms, -kInf) ==
          doctest::Approx(mean(two_atoms)).epsilon(1e-12));
    CHECK(conditional_mean_above(RiskDistribution::beta(1.0, 1.0), 0.5) ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK_THROWS_AS(conditional_mean_above(two_atoms, 0.9), ZeroMassAboveThreshold);

    // non-decreasing in t and at least the unconditional mean
    const auto beta = RiskDistribution::beta(2.0, 3.0);
    double prev = mean(beta);
    for (double t = 0.0; t < 0.95; t += 0.05) {
      const double m = conditional_mean_above(beta, t);
      CHECK(m >= prev - 1e-12);
      CHECK(m >= mean(beta) - 1e-12);
      prev = m;
    }

    // closed forms agree with a normal's Mills-ratio expression
    const auto normal = RiskDistribution::normal(1.0, 4.0);
    const double t = 2.5;
    const double z = (t - 1.0) / 2.0;
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
    const double tail = 0.5 * std::erfc(z / std::sqrt(2.0));
    CHECK(conditional_mean_above(normal, t) ==
          doctest::Approx(1.0 + 2.0 * phi / tail).epsilon(1e-10));
  }

  TEST_CASE("closed-form moments match atom enumeration") {
    const auto bin = RiskDistribution::binomial(11, 0.3);
    CHECK(mean(bin) == doctest::Approx(11 * 0.3).epsilon(1e-12));
    CHECK(variance(bin) == doctest::Approx(11 * 0.3 * 0.7).epsilon(1e-9));

    const auto beta = RiskDistribution::beta(2.0, 6.0);
    CHECK(mean(beta) == doctest::Approx(0.25).epsilon(1e-12));
    const auto gamma = RiskDistribution::gamma(3.0, 2.0);
    CHECK(mean(gamma) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(variance(gamma) == doctest::Approx(0.75).epsilon(1e-12));
  }

  TEST_CASE("transformed distributions evaluate through the inverse map") {
    const auto base = RiskDistribution::beta(2.0, 2.0);
    const auto shifted = RiskDistribution::transformed(base, MonotoneTransform::affine(2.0, 1.0));
    CHECK(cdf(shifted, 1.0 + 2.0 * 0.3) == doctest::Approx(cdf(base, 0.3)).epsilon(1e-12));
    CHECK(mean(shifted) == doctest::Approx(2.0 * 0.5 + 1.0).epsilon(1e-12));
    CHECK(variance(shifted) == doctest::Approx(4.0 * variance(base)).epsilon(1e-12));

    const auto logit = RiskDistribution::transformed(base, MonotoneTransform::logit());
    CHECK(cdf(logit, 0.0) == doctest::Approx(cdf(base, 0.5)).epsilon(1e-12));
    CHECK(mean(logit) == doctest::Approx(0.0).epsilon(1e-8));  // symmetric pushforward

    const auto atoms = RiskDistribution::discrete({0.2, 0.8}, {0.5, 0.5});
    const auto log_atoms = RiskDistribution::transformed(atoms, MonotoneTransform::log());
    REQUIRE(log_atoms.atomic());
    CHECK(log_atoms.atoms()[0].value == doctest::Approx(std::log(0.2)).epsilon(1e-15));

    CHECK_THROWS_AS(RiskDistribution::transformed(RiskDistribution::normal(0.0, 1.0),
                                                  MonotoneTransform::log()),
                    InvalidDistribution);
  }

  TEST_CASE("tilt on atoms") {
    const auto two_atoms = RiskDistribution::discrete({0.2, 0.8}, {0.5, 0.5});

    const auto identity = tilt(two_atoms, [](double) { return 1.0; });
    REQUIRE(identity.atomic());
    CHECK(identity.atoms()[0].mass == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(identity.atoms()[1].mass == doctest::Approx(0.5).epsilon(1e-15));

    const auto by_value = tilt(two_atoms, [](double x) { return x; });
    CHECK(by_value.atoms()[0].mass == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(by_value.atoms()[1].mass == doctest::Approx(0.8).epsilon(1e-12));

    const auto sole = RiskDistribution::discrete({0.5}, {1.0});
    const auto tilted_sole = tilt(sole, [](double x) { return 3.0 + x; });
    CHECK(tilted_sole.atoms().size() == 1);
    CHECK(tilted_sole.atoms()[0].mass == 1.0);

    CHECK_THROWS_AS(tilt(two_atoms, [](double) { return 0.0; }), DegenerateTilt);
    CHECK_THROWS_AS(tilt(two_atoms, [](double) { return -1.0; }), DegenerateTilt);
  }

  TEST_CASE("tilt of a continuous distribution matches the closed form") {
    // tilting Beta(a, b) by x gives Beta(a + 1, b)
    const auto tilted = tilt(RiskDistribution::beta(2.0, 4.0), [](double x) { return x; });
    const auto expected = RiskDistribution::beta(3.0, 4.0);
    for (double x = 0.05; x < 1.0; x += 0.07)
      CHECK(cdf(tilted, x) == doctest::Approx(cdf(expected, x)).epsilon(1e-7));
    CHECK(mean(tilted) == doctest::Approx(mean(expected)).epsilon(1e-8));
  }

  TEST_CASE("check_ordering closed forms and exact atoms") {
    const auto r1 =
        check_ordering(RiskDistribution::beta(2.0, 1.0), RiskDistribution::beta(1.0, 2.0));
    CHECK(r1.mlrp == Ordering::FirstDominates);
    CHECK(r1.stochastic_dominance == Ordering::FirstDominates);

    const auto r2 =
        check_ordering(RiskDistribution::normal(0.0, 1.0), RiskDistribution::normal(0.0, 1.0));
    CHECK(r2.mlrp == Ordering::Equal);
    CHECK(r2.stochastic_dominance == Ordering::Equal);
    CHECK(r2.max_cdf_violation == doctest::Approx(0.0).epsilon(1e-15));

    const auto r3 = check_ordering(RiskDistribution::discrete({0.0, 1.0}, {0.5, 0.5}),
                                   RiskDistribution::discrete({0.0, 1.0}, {0.9, 0.1}));
    CHECK(r3.mlrp == Ordering::FirstDominates);

    // unequal-variance normals fail in both directions
    const auto r4 =
        check_ordering(RiskDistribution::normal(0.0, 1.0), RiskDistribution::normal(0.0, 2.0));
    CHECK(r4.mlrp == Ordering::Neither);

    // a clear non-mlrp discrete pair
    const auto r5 = check_ordering(RiskDistribution::discrete({0.2, 0.5, 0.8}, {0.1, 0.5, 0.4}),
                                   RiskDistribution::discrete({0.2, 0.5, 0.8}, {0.3, 0.2, 0.5}));
    CHECK(r5.mlrp == Ordering::Neither);
    CHECK(r5.max_likelihood_ratio_inversion > 1e-6);
  }

  TEST_CASE("check_ordering rejects disjoint continuous supports") {
    const auto low = RiskDistribution::beta(2.0, 2.0);
    const auto high = RiskDistribution::transformed(RiskDistribution::beta(2.0, 2.0),
                                                    MonotoneTransform::affine(1.0, 5.0));
    CHECK_THROWS_AS(check_ordering(low, high), IncompatibleSupports);
    // atomic pairs always compare on the union support
    const auto r = check_ordering(RiskDistribution::discrete({0.3}, {1.0}),
                                  RiskDistribution::discrete({0.7}, {1.0}));
    CHECK(r.mlrp == Ordering::SecondDominates);
  }

  TEST_CASE("mlrp is preserved by shared monotone transformations") {
    Rng rng(2024);
    for (int i = 0; i < 20; ++i) {
      auto [d0, d1] = random_beta_mlrp_pair(rng);
      const auto log0 = RiskDistribution::transformed(d0, MonotoneTransform::log());
      const auto log1 = RiskDistribution::transformed(d1, MonotoneTransform::log());
      CHECK(check_ordering(log0, log1).mlrp == Ordering::FirstDominates);
    }
  }

  TEST_CASE("property: mlrp implies stochastic dominance on parametric families") {
    Rng rng(7);
    using PairFn = std::pair<RiskDistribution, RiskDistribution> (*)(Rng&);
    const PairFn families[] = {&random_beta_mlrp_pair, &random_normal_mlrp_pair,
                               &random_gamma_mlrp_pair, &random_binomial_mlrp_pair};
    for (const auto family : families) {
      for (int i = 0; i < 30; ++i) {
        const auto [d0, d1] = family(rng);
        const auto report = check_ordering(d0, d1);
        REQUIRE(report.mlrp == Ordering::FirstDominates);
        CHECK((report.stochastic_dominance == Ordering::FirstDominates ||
               report.stochastic_dominance == Ordering::Equal));
        CHECK(report.max_cdf_violation <= 1e-9);
      }
    }
  }

  TEST_CASE("property: tilts preserve dominance on discrete mlrp pairs") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
      const auto [d0, d1] = random_discrete_mlrp_pair(rng);
      for (int k = 0; k < 3; ++k) {
        const auto weight = random_positive_weight(rng);
        const auto t0 = tilt(d0, weight);
        const auto t1 = tilt(d1, weight);
        // first dominates: F0 <= F1 pointwise, checked exactly on the atoms
        for (const auto& a : t0.atoms()) CHECK(cdf(t0, a.value) <= cdf(t1, a.value) + 1e-12);
      }
    }
  }

  TEST_CASE("property: mlrp implies conditional mean ordering") {
    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
      const auto [upper, lower] = random_discrete_mlrp_pair(rng);
      for (const auto& a : lower.atoms()) {
        const double t = a.value;
        if (tail_mass(upper, t) <= 0.0 || tail_mass(lower, t) <= 0.0) continue;
        CHECK(conditional_mean_above(upper, t) >= conditional_mean_above(lower, t) - 1e-12);
      }
    }
  }

  TEST_CASE("property: dominance gives monotone expectations") {
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
      const auto [d0, d1] = random_discrete_mlrp_pair(rng);
      for (int k = 0; k < 3; ++k) {
        const auto f = random_nondecreasing_step(rng);
        CHECK(atom_expectation(d0, f) >= atom_expectation(d1, f) - 1e-12);
      }
    }
  }

  TEST_CASE("property: posterior monotone iff mlrp holds") {
    Rng rng(19);
    for (int i = 0; i < 40; ++i) {
      auto [d0, d1] = random_discrete_mlrp_pair(rng);
      const double share = rng.uniform(0.2, 0.8);
      if (rng.bernoulli(0.5) && d1.atoms().size() >= 2) {
        // swap end masses of d1 hard enough to break the ratio ordering
        std::vector<double> values, masses;
        for (const auto& a : d1.atoms()) {
          values.push_back(a.value);
          masses.push_back(a.mass);
        }
        std::swap(masses.front(), masses.back());
        masses.front() *= 4.0;
        d1 = RiskDistribution::discrete(values, masses);
      }
      const auto report = check_ordering(d0, d1);
      std::vector<double> posterior;
      for (std::size_t k = 0; k < d0.atoms().size(); ++k) {
        const double m0 = d0.atoms()[k].mass, m1 = d1.atoms()[k].mass;
        posterior.push_back(share * m1 / (share * m1 + (1.0 - share) * m0));
      }
      bool inc = true, dec = true;
      for (std::size_t k = 0; k + 1 < posterior.size(); ++k) {
        if (posterior[k + 1] < posterior[k] - 1e-12) inc = false;
        if (posterior[k + 1] > posterior[k] + 1e-12) dec = false;
      }
      CHECK((inc || dec) == (report.mlrp != Ordering::Neither));
    }
  }

  TEST_CASE("extended distributions carry endpoint mass") {
    const auto ext = make_extended(RiskDistribution::discrete({0.5}, {1.0}), 0.0, 0.25);
    CHECK(ext.core_weight() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(cdf(ext, 0.4) == 0.0);
    CHECK(cdf(ext, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(cdf(ext, kInf) == 1.0);
    CHECK_THROWS_AS(make_extended(RiskDistribution::discrete({0.5}, {1.0}), 0.7, 0.7),
                    InvalidDistribution);
  }

  TEST_CASE("binned_posterior") {
    GroupedSample sample;
    const auto add = [&](int g, double r) {
      SampleRow row;
      row.group = g;
      row.decision = 0;
      row.risk = r;
      sample.rows.push_back(row);
    };

    SUBCASE("hand-enumerated four-row example") {
      add(0, 0.1);
      add(0, 0.4);
      add(1, 0.6);
      add(1, 0.9);
      const auto bins = binned_posterior(sample, 2, 1);
      REQUIRE(bins.size() == 2);
      CHECK(bins[0].risk_center == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(bins[0].group1_share == 0.0);
      CHECK(bins[0].count == 2);
      CHECK(bins[1].risk_center == doctest::Approx(0.75).epsilon(1e-12));
      CHECK(bins[1].group1_share == 1.0);
      CHECK(bins[1].count == 2);
    }

    SUBCASE("identical risk mixes give a flat curve") {
      for (int i = 0; i < 60; ++i) {
        add(0, 0.1 + 0.01 * i);
        add(1, 0.1 + 0.01 * i);
      }
      for (const auto& b : binned_posterior(sample, 4, 1))
        CHECK(b.group1_share == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("separated supports split cleanly") {
      for (int i = 0; i < 30; ++i) add(0, 0.1 + 0.001 * i);
      for (int i = 0; i < 30; ++i) add(1, 0.7 + 0.001 * i);
      const auto bins = binned_posterior(sample, 2, 1);
      REQUIRE(bins.size() == 2);
      CHECK(bins[0].group1_share == 0.0);
      CHECK(bins[1].group1_share == 1.0);
    }

    SUBCASE("counts always sum to the sample size") {
      Rng rng(23);
      for (int i = 0; i < 137; ++i) add(static_cast<int>(rng.index(2)), rng.uniform01());
      for (std::size_t bins = 2; bins <= 12; bins += 3) {
        std::size_t total = 0;
        for (const auto& b : binned_posterior(sample, bins, 10)) total += b.count;
        CHECK(total == sample.rows.size());
      }
    }

    SUBCASE("small bins merge rightward") {
      for (int i = 0; i < 10; ++i) add(i % 2, 0.1 * i);
      for (const auto& b : binned_posterior(sample, 5, 4)) CHECK(b.count >= 4);
    }

    SUBCASE("missing risk scores are an error") {
      add(0, 0.1);
      add(1, 0.2);
      sample.rows.back().risk.reset();
      CHECK_THROWS_AS(binned_posterior(sample, 2, 1), MissingRiskScores);
    }
  }
}
