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

#include "rotest/policies.hpp"
#include "rotest/random.hpp"
#include "rotest/serialize.hpp"

using namespace rotest;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DecisionPolicy sample_policy(Rng& rng) {
  switch (rng.index(4)) {
    case 0:
      return DecisionPolicy::threshold(rng.uniform(-1.0, 1.0));
    case 1:
      return DecisionPolicy::logistic(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 8.0));
    case 2: {
      const double t = rng.uniform(0.15, 0.85);
      return DecisionPolicy::beta_cdf(t, rng.uniform(0.2, 0.9) * t * (1.0 - t));
    }
    default: {
      std::vector<double> bps, levels;
      double b = rng.uniform(-1.0, 0.0), l = 0.0;
      const std::size_t k = 1 + rng.index(4);
      for (std::size_t i = 0; i < k; ++i) {
        b += rng.uniform(0.05, 0.5);
        l = std::min(1.0, l + rng.uniform(0.0, 0.5));
        bps.push_back(b);
        levels.push_back(l);
      }
      return DecisionPolicy::step_function(bps, levels);
    }
  }
}

}  // namespace

TEST_SUITE("policies") {
  TEST_CASE("apply") {
    CHECK(apply(DecisionPolicy::threshold(0.5), 0.5) == 1.0);  // the indicator includes equality
    CHECK(apply(DecisionPolicy::threshold(0.5), 0.49) == 0.0);
    CHECK(apply(DecisionPolicy::logistic(0.3, 4.0), 0.3) == doctest::Approx(0.5).epsilon(1e-15));
    for (double u = 0.0; u <= 1.0; u += 0.1)
      CHECK(apply(DecisionPolicy::threshold(0.0), u) == 1.0);

    const auto step = DecisionPolicy::step_function({0.2, 0.6}, {0.25, 0.75});
    CHECK(apply(step, 0.1) == 0.0);
    CHECK(apply(step, 0.2) == 0.25);  // right-continuous at the breakpoint
    CHECK(apply(step, 0.59) == 0.25);
    CHECK(apply(step, 0.6) == 0.75);
  }

  TEST_CASE("beta-cdf policies use the mean/variance parameterization") {
    const auto policy = DecisionPolicy::beta_cdf(0.5, 0.01);
    // nu = t(1-t)/sigma2 - 1 = 24: alpha = beta = 12
    CHECK(policy.beta_cdf_params().alpha == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(policy.beta_cdf_params().beta == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(apply(policy, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(apply(policy, -0.1) == 0.0);
    CHECK(apply(policy, 1.1) == 1.0);
    CHECK_THROWS_AS(DecisionPolicy::beta_cdf(0.5, 0.3), InvalidPolicy);  // sigma2 >= t(1-t)
  }

  TEST_CASE("apply is non-decreasing in u") {
    Rng rng(31);
    for (int i = 0; i < 60; ++i) {
      const auto policy = sample_policy(rng);
      const double a = rng.uniform(-2.0, 2.0);
      const double b = a + rng.uniform(0.0, 2.0);
      CHECK(apply(policy, a) <= apply(policy, b) + 1e-15);
      CHECK(apply(policy, a) >= 0.0);
      CHECK(apply(policy, b) <= 1.0);
    }
  }

  TEST_CASE("logistic curves recover the threshold rule as lambda grows") {
    const double t = 0.4;
    const auto sharp = DecisionPolicy::logistic(t, 1e6);
    const auto knife = DecisionPolicy::threshold(t);
    for (double offset = 0.01; offset < 1.0; offset *= 1.7) {
      CHECK(std::abs(apply(sharp, t + offset) - apply(knife, t + offset)) < 1e-3);
      CHECK(std::abs(apply(sharp, t - offset) - apply(knife, t - offset)) < 1e-3);
    }
  }

  TEST_CASE("generated distributions match the curve") {
    SUBCASE("threshold generates a point mass") {
      const auto ext = generated_distribution(DecisionPolicy::threshold(0.4));
      REQUIRE(ext.core.atomic());
      CHECK(ext.core.atoms().size() == 1);
      CHECK(ext.core.atoms()[0].value == 0.4);
      CHECK(ext.mass_at_minus_infinity == 0.0);
      CHECK(ext.mass_at_plus_infinity == 0.0);
    }

    SUBCASE("logistic generates a logistic distribution") {
      const auto policy = DecisionPolicy::logistic(0.3, 2.5);
      const auto ext = generated_distribution(policy);
      for (double u = -3.0; u <= 3.0; u += 0.25) {
        const double expected = 1.0 / (1.0 + std::exp(2.5 * (0.3 - u)));
        CHECK(cdf(ext, u) == doctest::Approx(expected).epsilon(1e-12));
      }
    }

    SUBCASE("beta-cdf generates the parameterized beta") {
      const auto policy = DecisionPolicy::beta_cdf(0.4, 0.02);
      const auto ext = generated_distribution(policy);
      REQUIRE(ext.core.kind() == RiskDistribution::Kind::Beta);
      CHECK(ext.core.beta_params().alpha ==
            doctest::Approx(policy.beta_cdf_params().alpha).epsilon(1e-15));
      CHECK(ext.core.beta_params().beta ==
            doctest::Approx(policy.beta_cdf_params().beta).epsilon(1e-15));
    }

    SUBCASE("step functions put escape mass at plus infinity") {
      const auto ext =
          generated_distribution(DecisionPolicy::step_function({0.2, 0.6}, {0.25, 0.75}));
      CHECK(ext.mass_at_plus_infinity == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(cdf(ext, 0.3) == doctest::Approx(0.25).epsilon(1e-12));
    }
  }

  TEST_CASE("property: cdf of the generated distribution equals the curve") {
    Rng rng(37);
    for (int i = 0; i < 40; ++i) {
      const auto policy = sample_policy(rng);
      const auto ext = generated_distribution(policy);
      for (int k = 0; k <= 1000; ++k) {
        const double u = -2.0 + 4.0 * k / 1000.0;
        CHECK(cdf(ext, u) == doctest::Approx(apply(policy, u)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("dyadic approximation") {
    SUBCASE("a threshold rule is its own approximation") {
      const auto approx = dyadic_approximation(DecisionPolicy::threshold(0.5), 3);
      REQUIRE(approx.breakpoints.size() == 8);
      for (double b : approx.breakpoints) CHECK(b == 0.5);
      CHECK(approx.evaluate(0.49) == 0.0);
      CHECK(approx.evaluate(0.5) == 1.0);
    }

    SUBCASE("logistic level-1 breakpoints") {
      const auto approx = dyadic_approximation(DecisionPolicy::logistic(0.0, 1.0), 1);
      REQUIRE(approx.breakpoints.size() == 2);
      // the level-1/2 crossing sits at the center, up to the rounding of the
      // evaluated curve itself
      CHECK(approx.breakpoints[0] == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(std::abs(approx.breakpoints[0]) < 1e-12);
      CHECK(approx.breakpoints[1] == kInf);  // the curve never reaches 1
    }

    SUBCASE("gap bound and refinement monotonicity") {
      Rng rng(41);
      for (int i = 0; i < 12; ++i) {
        const auto policy = sample_policy(rng);
        double prev_sup = 1.0;
        for (int level = 1; level <= 8; ++level) {
          const auto approx = dyadic_approximation(policy, level);
          const double bound = std::ldexp(1.0, -level);
          double sup = 0.0;
          for (int k = 0; k <= 2000; ++k) {
            const double u = -2.0 + 4.0 * k / 2000.0;
            const double gap = apply(policy, u) - approx.evaluate(u);
            CHECK(gap >= 0.0);
            CHECK(gap < bound);
            sup = std::max(sup, gap);
          }
          CHECK(sup <= prev_sup + 1e-15);
          prev_sup = sup;
        }
      }
    }

    SUBCASE("level-1 of a beta-cdf policy reaches 1 at the domain edge") {
      const auto approx = dyadic_approximation(DecisionPolicy::beta_cdf(0.5, 0.02), 1);
      CHECK(approx.breakpoints[1] <= 1.0);  // apply(1) = 1 exactly
    }
  }

  TEST_CASE("policies_mlrp_ordered") {
    const auto r1 = policies_mlrp_ordered(DecisionPolicy::threshold(0.3),
                                          DecisionPolicy::threshold(0.7));
    CHECK(r1.mlrp == Ordering::SecondDominates);

    const auto r2 = policies_mlrp_ordered(DecisionPolicy::logistic(0.0, 2.0),
                                          DecisionPolicy::logistic(1.0, 2.0));
    CHECK(r2.mlrp == Ordering::SecondDominates);

    const auto r3 = policies_mlrp_ordered(DecisionPolicy::threshold(0.5),
                                          DecisionPolicy::threshold(0.5));
    CHECK(r3.mlrp == Ordering::Equal);

    const auto r4 = policies_mlrp_ordered(DecisionPolicy::beta_cdf(0.6, 0.01),
                                          DecisionPolicy::beta_cdf(0.4, 0.01));
    CHECK(r4.mlrp == Ordering::FirstDominates);
  }

  TEST_CASE("policy json round trip") {
    Rng rng(43);
    for (int i = 0; i < 20; ++i) {
      const auto policy = sample_policy(rng);
      const auto restored = policy_from_json(policy_to_json(policy));
      REQUIRE(restored.kind() == policy.kind());
      for (double u = -1.5; u <= 1.5; u += 0.05)
        CHECK(apply(restored, u) == doctest::Approx(apply(policy, u)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(policy_from_json(nlohmann::json{{"kind", "nope"}}), ValueError);
  }
}
