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

#include "rotest/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/beta.hpp>

namespace rotest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidPolicy(what);
}

}  // namespace

DecisionPolicy DecisionPolicy::threshold(double t) {
  require(std::isfinite(t), "Threshold requires a finite t");
  return DecisionPolicy(Kind::Threshold, ThresholdParams{t});
}

DecisionPolicy DecisionPolicy::logistic(double t, double lambda) {
  require(std::isfinite(t), "Logistic requires a finite t");
  require(lambda > 0.0 && std::isfinite(lambda), "Logistic requires lambda > 0");
  return DecisionPolicy(Kind::Logistic, LogisticParams{t, lambda});
}

DecisionPolicy DecisionPolicy::beta_cdf(double t, double sigma2) {
  require(t > 0.0 && t < 1.0, "BetaCdf requires t in (0, 1)");
  require(sigma2 > 0.0 && sigma2 < t * (1.0 - t), "BetaCdf requires 0 < sigma2 < t (1 - t)");
  const double nu = t * (1.0 - t) / sigma2 - 1.0;  // alpha + beta
  const double alpha = t * nu;
  const double beta = (1.0 - t) * nu;
  require(alpha > 0.0 && beta > 0.0, "BetaCdf implied shape parameters must be positive");
  return DecisionPolicy(Kind::BetaCdf, BetaCdfParams{t, sigma2, alpha, beta});
}

DecisionPolicy DecisionPolicy::step_function(std::vector<double> breakpoints,
                                             std::vector<double> levels) {
  require(!breakpoints.empty(), "StepFunction requires at least one breakpoint");
  require(breakpoints.size() == levels.size(),
          "StepFunction requires matching breakpoints and levels");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    require(std::isfinite(breakpoints[i]), "StepFunction breakpoints must be finite");
    if (i > 0)
      require(breakpoints[i] > breakpoints[i - 1],
              "StepFunction breakpoints must be strictly increasing");
    require(levels[i] >= 0.0 && levels[i] <= 1.0, "StepFunction levels must lie in [0, 1]");
    if (i > 0)
      require(levels[i] >= levels[i - 1], "StepFunction levels must be non-decreasing");
  }
  return DecisionPolicy(Kind::StepFunction, StepParams{std::move(breakpoints), std::move(levels)});
}

double apply(const DecisionPolicy& policy, double u) {
  switch (policy.kind()) {
    case DecisionPolicy::Kind::Threshold:
      return u >= policy.threshold_params().t ? 1.0 : 0.0;
    case DecisionPolicy::Kind::Logistic: {
      const auto& p = policy.logistic_params();
      return 1.0 / (1.0 + std::exp(p.lambda * (p.t - u)));
    }
    case DecisionPolicy::Kind::BetaCdf: {
      const auto& p = policy.beta_cdf_params();
      if (u <= 0.0) return 0.0;
      if (u >= 1.0) return 1.0;
      return boost::math::cdf(boost::math::beta_distribution<double>(p.alpha, p.beta), u);
    }
    case DecisionPolicy::Kind::StepFunction: {
      const auto& p = policy.step_params();
      auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), u);
      if (it == p.breakpoints.begin()) return 0.0;
      return p.levels[static_cast<std::size_t>(it - p.breakpoints.begin()) - 1];
    }
  }
  return 0.0;
}

ExtendedDistribution generated_distribution(const DecisionPolicy& policy) {
  switch (policy.kind()) {
    case DecisionPolicy::Kind::Threshold:
      return make_extended(
          RiskDistribution::discrete({policy.threshold_params().t}, {1.0}));
    case DecisionPolicy::Kind::Logistic: {
      // the logistic curve is the CDF of t + logit(V)/lambda with V uniform
      const auto& p = policy.logistic_params();
      RiskDistribution core = RiskDistribution::transformed(
          RiskDistribution::transformed(RiskDistribution::beta(1.0, 1.0),
                                        MonotoneTransform::logit()),
          MonotoneTransform::affine(1.0 / p.lambda, p.t));
      return make_extended(std::move(core));
    }
    case DecisionPolicy::Kind::BetaCdf: {
      const auto& p = policy.beta_cdf_params();
      return make_extended(RiskDistribution::beta(p.alpha, p.beta));
    }
    case DecisionPolicy::Kind::StepFunction: {
      const auto& p = policy.step_params();
      std::vector<double> values, masses;
      double prev = 0.0;
      for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
        const double inc = p.levels[i] - prev;
        prev = p.levels[i];
        if (inc > 0.0) {
          values.push_back(p.breakpoints[i]);
          masses.push_back(inc);
        }
      }
      const double top = p.levels.back();
      if (values.empty())  // the all-zero curve: everything escapes to +inf
        return make_extended(RiskDistribution::discrete({0.0}, {1.0}), 0.0, 1.0);
      return make_extended(RiskDistribution::discrete(std::move(values), std::move(masses)), 0.0,
                           1.0 - top);
    }
  }
  throw InvalidPolicy("unknown policy kind");
}

// ---------------------------------------------------------------------------
// Dyadic approximation
// ---------------------------------------------------------------------------

namespace {

// Smallest double >= the true level crossing, computed by float bisection
// from an analytic seed. pred(u) = (apply(u) >= y) is monotone in u.
double float_infimum(const DecisionPolicy& policy, double y, double seed) {
  const auto pred = [&](double u) { return apply(policy, u) >= y; };

  double lo, hi;
  if (pred(seed)) {
    hi = seed;
    double step = std::max(1e-9, std::abs(seed) * 1e-9);
    lo = seed - step;
    while (pred(lo)) {
      hi = lo;
      lo -= step;
      step *= 4.0;
      if (!std::isfinite(lo)) throw InvalidPolicy("level crossing unbounded below");
    }
  } else {
    lo = seed;
    double step = std::max(1e-9, std::abs(seed) * 1e-9);
    hi = seed + step;
    while (!pred(hi)) {
      lo = hi;
      hi += step;
      step *= 4.0;
      if (!std::isfinite(hi)) return kInf;  // the curve never reaches y
    }
  }

  // invariant: !pred(lo) && pred(hi); shrink to adjacent doubles
  for (int i = 0; i < 200; ++i) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

double level_infimum(const DecisionPolicy& policy, double y) {
  if (!(y > 0.0 && y <= 1.0)) throw InvalidPolicy("level_infimum requires y in (0, 1]");
  switch (policy.kind()) {
    case DecisionPolicy::Kind::Threshold:
      return policy.threshold_params().t;
    case DecisionPolicy::Kind::StepFunction: {
      const auto& p = policy.step_params();
      for (std::size_t i = 0; i < p.levels.size(); ++i)
        if (p.levels[i] >= y) return p.breakpoints[i];
      return kInf;
    }
    case DecisionPolicy::Kind::Logistic: {
      const auto& p = policy.logistic_params();
      if (y >= 1.0) return kInf;  // the curve approaches 1 but never reaches it
      const double seed = p.t + std::log(y / (1.0 - y)) / p.lambda;
      return float_infimum(policy, y, seed);
    }
    case DecisionPolicy::Kind::BetaCdf: {
      const auto& p = policy.beta_cdf_params();
      double seed = 1.0;
      if (y < 1.0)
        seed = boost::math::quantile(boost::math::beta_distribution<double>(p.alpha, p.beta), y);
      return float_infimum(policy, y, seed);
    }
  }
  throw InvalidPolicy("unknown policy kind");
}

DyadicApproximation dyadic_approximation(const DecisionPolicy& policy, int level) {
  if (level < 1) throw InvalidPolicy("dyadic_approximation requires level >= 1");
  if (level > 24) throw InvalidPolicy("dyadic_approximation level capped at 24");
  DyadicApproximation approx;
  approx.level = level;
  const std::size_t count = std::size_t{1} << level;
  approx.breakpoints.resize(count);
  double prev = -kInf;
  for (std::size_t k = 1; k <= count; ++k) {
    const double y = std::ldexp(static_cast<double>(k), -level);  // k 2^{-n}, exact
    double ell = level_infimum(policy, y);
    ell = std::max(ell, prev);
    prev = ell;
    approx.breakpoints[k - 1] = ell;
  }
  return approx;
}

double DyadicApproximation::evaluate(double u) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), u);
  const auto reached = static_cast<double>(it - breakpoints.begin());
  return std::ldexp(reached, -level);
}

OrderingReport policies_mlrp_ordered(const DecisionPolicy& p0, const DecisionPolicy& p1,
                                     const GridSpec& grid) {
  return check_ordering(generated_distribution(p0), generated_distribution(p1), grid);
}

}  // namespace rotest
