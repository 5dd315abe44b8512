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

#include "rotest/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace rotest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, lo, hi);
}

// Quantile for quadrature integrands: the endpoint clamp keeps inverse-CDF
// root finding away from the extremes the tanh-sinh nodes probe; the mass
// ignored this way is below every tolerance used on these paths.
double quantile_for_integration(const RiskDistribution& d, double p) {
  return quantile(d, std::clamp(p, 1e-12, 1.0 - 1e-12));
}

boost::math::beta_distribution<double> boost_beta(const RiskDistribution::BetaParams& p) {
  return boost::math::beta_distribution<double>(p.alpha, p.beta);
}

boost::math::normal_distribution<double> boost_normal(const RiskDistribution::NormalParams& p) {
  return boost::math::normal_distribution<double>(p.mean, std::sqrt(p.variance));
}

boost::math::gamma_distribution<double> boost_gamma(const RiskDistribution::GammaParams& p) {
  return boost::math::gamma_distribution<double>(p.shape, 1.0 / p.rate);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidDistribution(what);
}

}  // namespace

// ---------------------------------------------------------------------------
// MonotoneTransform
// ---------------------------------------------------------------------------

MonotoneTransform MonotoneTransform::affine(double scale, double shift) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift))
    throw InvalidDistribution("affine transform requires finite shift and scale > 0");
  return MonotoneTransform(Kind::Affine, scale, shift);
}

double MonotoneTransform::forward(double x) const {
  switch (kind_) {
    case Kind::Log:
      return std::log(x);
    case Kind::Logit:
      return std::log(x / (1.0 - x));
    case Kind::Affine:
      return scale_ * x + shift_;
  }
  return x;
}

double MonotoneTransform::inverse(double y) const {
  switch (kind_) {
    case Kind::Log:
      return std::exp(y);
    case Kind::Logit:
      return 1.0 / (1.0 + std::exp(-y));
    case Kind::Affine:
      return (y - shift_) / scale_;
  }
  return y;
}

double MonotoneTransform::inverse_derivative(double y) const {
  switch (kind_) {
    case Kind::Log:
      return std::exp(y);
    case Kind::Logit: {
      // s(1-s) without the cancellation that 1 - s suffers for large |y|
      const double a = std::exp(-std::abs(y));
      return a / ((1.0 + a) * (1.0 + a));
    }
    case Kind::Affine:
      return 1.0 / scale_;
  }
  return 1.0;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

void RiskDistribution::finalize_atoms(std::vector<Atom> atoms, Kind kind) {
  double total = 0.0;
  for (const auto& a : atoms) {
    require(std::isfinite(a.value), "atom values must be finite");
    require(a.mass >= 0.0 && std::isfinite(a.mass), "atom masses must be finite and >= 0");
    total += a.mass;
  }
  require(total > 0.0 && std::isfinite(total), "atom masses must have positive finite total");

  std::vector<Atom> kept;
  kept.reserve(atoms.size());
  for (const auto& a : atoms)
    if (a.mass > 0.0) kept.push_back({a.value, a.mass / total});
  require(!kept.empty(), "distribution needs at least one atom with positive mass");

  atoms_ = std::move(kept);
  cum_.resize(atoms_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    run += atoms_[i].mass;
    cum_[i] = run;
  }
  cum_.back() = 1.0;  // pin the final cumulative exactly
  support_lo_ = atoms_.front().value;
  support_hi_ = atoms_.back().value;
  kind_ = kind;
}

RiskDistribution RiskDistribution::beta(double alpha, double beta) {
  require(alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(beta),
          "Beta requires alpha > 0 and beta > 0");
  RiskDistribution d(Kind::Beta, BetaParams{alpha, beta});
  d.support_lo_ = 0.0;
  d.support_hi_ = 1.0;
  return d;
}

RiskDistribution RiskDistribution::normal(double mean, double variance) {
  require(variance > 0.0 && std::isfinite(mean) && std::isfinite(variance),
          "Normal requires finite mean and variance > 0");
  RiskDistribution d(Kind::Normal, NormalParams{mean, variance});
  d.support_lo_ = -kInf;
  d.support_hi_ = kInf;
  return d;
}

RiskDistribution RiskDistribution::gamma(double shape, double rate) {
  require(shape > 0.0 && rate > 0.0 && std::isfinite(shape) && std::isfinite(rate),
          "Gamma requires shape > 0 and rate > 0");
  RiskDistribution d(Kind::Gamma, GammaParams{shape, rate});
  d.support_lo_ = 0.0;
  d.support_hi_ = kInf;
  return d;
}

RiskDistribution RiskDistribution::binomial(int trials, double p) {
  require(trials >= 1, "Binomial requires trials >= 1");
  require(p >= 0.0 && p <= 1.0, "Binomial requires 0 <= p <= 1");
  boost::math::binomial_distribution<double> bin(trials, p);
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(trials) + 1);
  for (int k = 0; k <= trials; ++k)
    atoms.push_back({static_cast<double>(k), boost::math::pdf(bin, static_cast<double>(k))});
  RiskDistribution d(Kind::Binomial, BinomialParams{trials, p});
  d.finalize_atoms(std::move(atoms), Kind::Binomial);
  return d;
}

RiskDistribution RiskDistribution::discrete(std::vector<double> values,
                                            std::vector<double> masses) {
  require(values.size() == masses.size(), "Discrete requires matching values and masses");
  require(!values.empty(), "Discrete requires at least one atom");
  for (std::size_t i = 1; i < values.size(); ++i)
    require(values[i] > values[i - 1], "Discrete support must be strictly increasing");
  std::vector<Atom> atoms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) atoms[i] = {values[i], masses[i]};
  RiskDistribution d(Kind::Discrete, std::monostate{});
  d.finalize_atoms(std::move(atoms), Kind::Discrete);
  return d;
}

RiskDistribution RiskDistribution::empirical(std::vector<double> samples,
                                             std::vector<double> weights) {
  require(!samples.empty(), "Empirical requires at least one sample");
  if (weights.empty()) weights.assign(samples.size(), 1.0);
  require(samples.size() == weights.size(), "Empirical requires matching samples and weights");

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return samples[a] < samples[b]; });

  std::vector<Atom> atoms;
  atoms.reserve(samples.size());
  for (std::size_t idx : order) {
    if (!atoms.empty() && atoms.back().value == samples[idx])
      atoms.back().mass += weights[idx];
    else
      atoms.push_back({samples[idx], weights[idx]});
  }
  RiskDistribution d(Kind::Empirical, std::monostate{});
  d.finalize_atoms(std::move(atoms), Kind::Empirical);
  return d;
}

RiskDistribution RiskDistribution::transformed(RiskDistribution base, MonotoneTransform map) {
  if (map.kind() == MonotoneTransform::Kind::Log)
    require(base.support_lo() >= 0.0, "log transform requires a nonnegative base support");
  if (map.kind() == MonotoneTransform::Kind::Logit)
    require(base.support_lo() >= 0.0 && base.support_hi() <= 1.0,
            "logit transform requires a base supported on [0, 1]");

  if (base.atomic()) {
    std::vector<Atom> atoms = base.atoms();
    for (auto& a : atoms) {
      a.value = map.forward(a.value);
      require(std::isfinite(a.value), "transform must be finite on the base's atoms");
    }
    RiskDistribution d(Kind::Transformed,
                       TransformedParams{std::make_shared<RiskDistribution>(std::move(base)), map});
    d.finalize_atoms(std::move(atoms), Kind::Transformed);
    return d;
  }

  const double lo = map.forward(base.support_lo());
  const double hi = map.forward(base.support_hi());
  RiskDistribution d(Kind::Transformed,
                     TransformedParams{std::make_shared<RiskDistribution>(std::move(base)), map});
  d.support_lo_ = lo;
  d.support_hi_ = hi;
  return d;
}

const std::vector<Atom>& RiskDistribution::atoms() const {
  if (atoms_.empty()) throw Error("atoms() called on a non-atomic distribution");
  return atoms_;
}

// ---------------------------------------------------------------------------
// Pointwise evaluation
// ---------------------------------------------------------------------------

double cdf(const RiskDistribution& dist, double x) {
  if (std::isnan(x)) throw Error("cdf: x is NaN");
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;

  if (dist.atomic()) {
    const auto& atoms = dist.atoms();
    double run = 0.0;
    for (const auto& a : atoms) {
      if (a.value > x) break;
      run += a.mass;
    }
    return std::min(run, 1.0);
  }

  switch (dist.kind()) {
    case RiskDistribution::Kind::Beta: {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::cdf(boost_beta(dist.beta_params()), x);
    }
    case RiskDistribution::Kind::Normal:
      return boost::math::cdf(boost_normal(dist.normal_params()), x);
    case RiskDistribution::Kind::Gamma: {
      if (x <= 0.0) return 0.0;
      return boost::math::cdf(boost_gamma(dist.gamma_params()), x);
    }
    case RiskDistribution::Kind::Transformed: {
      const auto& p = dist.transformed_params();
      return cdf(*p.base, p.map.inverse(x));
    }
    case RiskDistribution::Kind::Tilted: {
      const auto& p = dist.tilted_params();
      const double plo = cdf(*p.base, x);
      const auto& base = *p.base;
      const auto& w = p.weight;
      const double num = integrate([&](double q) { return w(quantile_for_integration(base, q)); }, 0.0, plo);
      return std::clamp(num / p.normalizer, 0.0, 1.0);
    }
    default:
      throw Error("cdf: unsupported kind");
  }
}

double mass_at(const RiskDistribution& dist, double x) {
  if (!dist.atomic()) return 0.0;
  const auto& atoms = dist.atoms();
  auto it = std::lower_bound(atoms.begin(), atoms.end(), x,
                             [](const Atom& a, double v) { return a.value < v; });
  if (it != atoms.end() && it->value == x) return it->mass;
  return 0.0;
}

double density(const RiskDistribution& dist, double x) {
  if (dist.atomic()) return mass_at(dist, x);
  switch (dist.kind()) {
    case RiskDistribution::Kind::Beta: {
      if (x <= 0.0 || x >= 1.0) return 0.0;
      return boost::math::pdf(boost_beta(dist.beta_params()), x);
    }
    case RiskDistribution::Kind::Normal:
      return boost::math::pdf(boost_normal(dist.normal_params()), x);
    case RiskDistribution::Kind::Gamma: {
      if (x <= 0.0) return 0.0;
      return boost::math::pdf(boost_gamma(dist.gamma_params()), x);
    }
    case RiskDistribution::Kind::Transformed: {
      const auto& p = dist.transformed_params();
      return density(*p.base, p.map.inverse(x)) * p.map.inverse_derivative(x);
    }
    case RiskDistribution::Kind::Tilted: {
      const auto& p = dist.tilted_params();
      return p.weight(x) * density(*p.base, x) / p.normalizer;
    }
    default:
      throw Error("density: unsupported kind");
  }
}

double quantile(const RiskDistribution& dist, double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) throw Error("quantile: p must lie in [0, 1]");
  if (p <= 0.0) return dist.support_lo();
  if (p >= 1.0) return dist.support_hi();

  if (dist.atomic()) {
    const auto& atoms = dist.atoms();
    double run = 0.0;
    for (const auto& a : atoms) {
      run += a.mass;
      if (run >= p) return a.value;
    }
    return atoms.back().value;
  }

  switch (dist.kind()) {
    case RiskDistribution::Kind::Beta:
      return boost::math::quantile(boost_beta(dist.beta_params()), p);
    case RiskDistribution::Kind::Normal:
      return boost::math::quantile(boost_normal(dist.normal_params()), p);
    case RiskDistribution::Kind::Gamma:
      return boost::math::quantile(boost_gamma(dist.gamma_params()), p);
    case RiskDistribution::Kind::Transformed: {
      const auto& tp = dist.transformed_params();
      return tp.map.forward(quantile(*tp.base, p));
    }
    case RiskDistribution::Kind::Tilted: {
      const auto& tp = dist.tilted_params();
      double lo = quantile(*tp.base, 1e-14);
      double hi = quantile(*tp.base, 1.0 - 1e-14);
      for (int i = 0; i < 100 && hi - lo > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(dist, mid) >= p)
          hi = mid;
        else
          lo = mid;
      }
      return hi;
    }
    default:
      throw Error("quantile: unsupported kind");
  }
}

// ---------------------------------------------------------------------------
// Moments and tails
// ---------------------------------------------------------------------------

namespace {

// E[f(X)] in probability space: the integral of f(Q(p)) dp over (0, 1).
double expectation_via_quantile(const RiskDistribution& d,
                                const std::function<double(double)>& f) {
  return integrate([&](double p) { return f(quantile_for_integration(d, p)); }, 0.0, 1.0);
}

}  // namespace

double mean(const RiskDistribution& dist) {
  if (dist.atomic()) {
    double m = 0.0;
    for (const auto& a : dist.atoms()) m += a.value * a.mass;
    return m;
  }
  switch (dist.kind()) {
    case RiskDistribution::Kind::Beta: {
      const auto& p = dist.beta_params();
      return p.alpha / (p.alpha + p.beta);
    }
    case RiskDistribution::Kind::Normal:
      return dist.normal_params().mean;
    case RiskDistribution::Kind::Gamma: {
      const auto& p = dist.gamma_params();
      return p.shape / p.rate;
    }
    case RiskDistribution::Kind::Transformed: {
      const auto& p = dist.transformed_params();
      if (p.map.kind() == MonotoneTransform::Kind::Affine)
        return p.map.scale() * mean(*p.base) + p.map.shift();
      const auto& map = p.map;
      return expectation_via_quantile(*p.base, [&](double x) { return map.forward(x); });
    }
    case RiskDistribution::Kind::Tilted: {
      const auto& p = dist.tilted_params();
      const auto& w = p.weight;
      return expectation_via_quantile(*p.base, [&](double x) { return x * w(x); }) /
             p.normalizer;
    }
    default:
      throw Error("mean: unsupported kind");
  }
}

double variance(const RiskDistribution& dist) {
  if (dist.atomic()) {
    const double m = mean(dist);
    double v = 0.0;
    for (const auto& a : dist.atoms()) v += (a.value - m) * (a.value - m) * a.mass;
    return v;
  }
  switch (dist.kind()) {
    case RiskDistribution::Kind::Beta: {
      const auto& p = dist.beta_params();
      const double s = p.alpha + p.beta;
      return p.alpha * p.beta / (s * s * (s + 1.0));
    }
    case RiskDistribution::Kind::Normal:
      return dist.normal_params().variance;
    case RiskDistribution::Kind::Gamma: {
      const auto& p = dist.gamma_params();
      return p.shape / (p.rate * p.rate);
    }
    case RiskDistribution::Kind::Transformed: {
      const auto& p = dist.transformed_params();
      if (p.map.kind() == MonotoneTransform::Kind::Affine)
        return p.map.scale() * p.map.scale() * variance(*p.base);
      const double m = mean(dist);
      const auto& map = p.map;
      return expectation_via_quantile(*p.base, [&](double x) {
        const double y = map.forward(x) - m;
        return y * y;
      });
    }
    case RiskDistribution::Kind::Tilted: {
      const double m = mean(dist);
      const auto& p = dist.tilted_params();
      const auto& w = p.weight;
      return expectation_via_quantile(
                 *p.base, [&](double x) { return (x - m) * (x - m) * w(x); }) /
             p.normalizer;
    }
    default:
      throw Error("variance: unsupported kind");
  }
}

double tail_mass(const RiskDistribution& dist, double t) {
  if (std::isnan(t)) throw Error("tail_mass: t is NaN");
  if (t == -kInf) return 1.0;
  if (t == kInf) return 0.0;

  if (dist.atomic()) {
    const auto& atoms = dist.atoms();
    double m = 0.0;
    for (auto it = atoms.rbegin(); it != atoms.rend() && it->value >= t; ++it) m += it->mass;
    return m;
  }

  switch (dist.kind()) {
    case RiskDistribution::Kind::Beta: {
      if (t <= 0.0) return 1.0;
      if (t >= 1.0) return 0.0;
      return boost::math::cdf(boost::math::complement(boost_beta(dist.beta_params()), t));
    }
    case RiskDistribution::Kind::Normal:
      return boost::math::cdf(boost::math::complement(boost_normal(dist.normal_params()), t));
    case RiskDistribution::Kind::Gamma: {
      if (t <= 0.0) return 1.0;
      return boost::math::cdf(boost::math::complement(boost_gamma(dist.gamma_params()), t));
    }
    case RiskDistribution::Kind::Transformed: {
      const auto& p = dist.transformed_params();
      return tail_mass(*p.base, p.map.inverse(t));
    }
    case RiskDistribution::Kind::Tilted:
      return 1.0 - cdf(dist, t);
    default:
      throw Error("tail_mass: unsupported kind");
  }
}

double conditional_mean_above(const RiskDistribution& dist, double t) {
  if (std::isnan(t)) throw Error("conditional_mean_above: t is NaN");
  if (t == -kInf) return mean(dist);

  if (dist.atomic()) {
    const auto& atoms = dist.atoms();
    double m = 0.0, num = 0.0;
    for (auto it = atoms.rbegin(); it != atoms.rend() && it->value >= t; ++it) {
      m += it->mass;
      num += it->value * it->mass;
    }
    if (m <= 0.0) throw ZeroMassAboveThreshold("no mass at or above threshold");
    return num / m;
  }

  const double tail = tail_mass(dist, t);
  if (tail <= 0.0) throw ZeroMassAboveThreshold("no mass at or above threshold");

  switch (dist.kind()) {
    case RiskDistribution::Kind::Beta: {
      const auto& p = dist.beta_params();
      // x f_{a,b}(x) = mean * f_{a+1,b}(x)
      const double m = p.alpha / (p.alpha + p.beta);
      const double shifted = tail_mass(RiskDistribution::beta(p.alpha + 1.0, p.beta), t);
      return m * shifted / tail;
    }
    case RiskDistribution::Kind::Normal: {
      const auto& p = dist.normal_params();
      const double sigma = std::sqrt(p.variance);
      const double z = (t - p.mean) / sigma;
      if (z > 37.0) return t + sigma / z;  // Mills-ratio asymptote past double range
      boost::math::normal_distribution<double> unit(0.0, 1.0);
      return p.mean + sigma * boost::math::pdf(unit, z) /
                          boost::math::cdf(boost::math::complement(unit, z));
    }
    case RiskDistribution::Kind::Gamma: {
      const auto& p = dist.gamma_params();
      const double m = p.shape / p.rate;
      const double shifted = tail_mass(RiskDistribution::gamma(p.shape + 1.0, p.rate), t);
      return m * shifted / tail;
    }
    case RiskDistribution::Kind::Transformed: {
      const auto& p = dist.transformed_params();
      if (p.map.kind() == MonotoneTransform::Kind::Affine)
        return p.map.scale() * conditional_mean_above(*p.base, p.map.inverse(t)) + p.map.shift();
      const double plo = cdf(*p.base, p.map.inverse(t));
      const auto& base = *p.base;
      const auto& map = p.map;
      const double num =
          integrate([&](double q) { return map.forward(quantile_for_integration(base, q)); }, plo, 1.0);
      return num / (1.0 - plo);
    }
    case RiskDistribution::Kind::Tilted: {
      const auto& p = dist.tilted_params();
      const double plo = cdf(*p.base, t);
      const auto& base = *p.base;
      const auto& w = p.weight;
      const double num = integrate(
          [&](double q) {
            const double x = quantile_for_integration(base, q);
            return x * w(x);
          },
          plo, 1.0);
      const double den = integrate([&](double q) { return w(quantile_for_integration(base, q)); }, plo, 1.0);
      if (den <= 0.0) throw ZeroMassAboveThreshold("no tilted mass at or above threshold");
      return num / den;
    }
    default:
      throw Error("conditional_mean_above: unsupported kind");
  }
}

// ---------------------------------------------------------------------------
// Tilt
// ---------------------------------------------------------------------------

RiskDistribution tilt(const RiskDistribution& dist, const std::function<double(double)>& weight) {
  if (dist.atomic()) {
    const auto& atoms = dist.atoms();
    std::vector<double> values, masses;
    values.reserve(atoms.size());
    masses.reserve(atoms.size());
    double total = 0.0;
    for (const auto& a : atoms) {
      const double w = weight(a.value);
      if (!(w >= 0.0) || !std::isfinite(w))
        throw DegenerateTilt("tilt weight must be finite and nonnegative");
      values.push_back(a.value);
      masses.push_back(w * a.mass);
      total += w * a.mass;
    }
    if (!(total > 0.0) || !std::isfinite(total))
      throw DegenerateTilt("tilt weight has zero or non-finite expectation");
    return RiskDistribution::discrete(std::move(values), std::move(masses));
  }

  auto base = std::make_shared<RiskDistribution>(dist);
  const double normalizer = integrate(
      [&](double p) {
        const double w = weight(quantile_for_integration(*base, p));
        if (!(w >= 0.0) || !std::isfinite(w))
          throw DegenerateTilt("tilt weight must be finite and nonnegative");
        return w;
      },
      0.0, 1.0);
  if (!(normalizer > 0.0) || !std::isfinite(normalizer))
    throw DegenerateTilt("tilt weight has zero or non-finite expectation");

  RiskDistribution out(RiskDistribution::Kind::Tilted,
                       RiskDistribution::TiltedParams{base, weight, normalizer});
  out.support_lo_ = base->support_lo();
  out.support_hi_ = base->support_hi();
  return out;
}

// ---------------------------------------------------------------------------
// Ordering checks
// ---------------------------------------------------------------------------

std::string to_string(Ordering o) {
  switch (o) {
    case Ordering::FirstDominates:
      return "first";
    case Ordering::SecondDominates:
      return "second";
    case Ordering::Neither:
      return "neither";
    case Ordering::Equal:
      return "equal";
  }
  return "?";
}

namespace {

// One side of an ordering comparison: a core distribution with a weight, plus
// point masses at the extended endpoints. Plain comparisons use weight 1 and
// zero endpoint masses.
struct Side {
  const RiskDistribution* core = nullptr;
  double weight = 1.0;
  double mass_minus = 0.0;
  double mass_plus = 0.0;

  bool degenerate_core() const { return core == nullptr || weight <= 0.0; }
  double cdf_at(double x) const {
    return mass_minus + (degenerate_core() ? 0.0 : weight * cdf(*core, x));
  }
  double density_at(double x) const {
    return degenerate_core() ? 0.0 : weight * density(*core, x);
  }
};

double finite_lo(const RiskDistribution& d, double tail_p) {
  const double lo = d.support_lo();
  return std::isfinite(lo) ? lo : quantile(d, tail_p);
}

double finite_hi(const RiskDistribution& d, double tail_p) {
  const double hi = d.support_hi();
  return std::isfinite(hi) ? hi : quantile(d, 1.0 - tail_p);
}

std::vector<double> build_points(const Side& s0, const Side& s1, const GridSpec& grid) {
  const bool have0 = !s0.degenerate_core();
  const bool have1 = !s1.degenerate_core();
  const bool atomic0 = have0 && s0.core->atomic();
  const bool atomic1 = have1 && s1.core->atomic();

  std::vector<double> points;
  if ((!have0 || atomic0) && (!have1 || atomic1)) {
    // both atomic: the union support, exactly
    if (have0)
      for (const auto& a : s0.core->atoms()) points.push_back(a.value);
    if (have1)
      for (const auto& a : s1.core->atoms()) points.push_back(a.value);
  } else {
    double lo = kInf, hi = -kInf;
    for (const Side* s : {&s0, &s1}) {
      if (s->degenerate_core()) continue;
      lo = std::min(lo, finite_lo(*s->core, grid.tail_probability));
      hi = std::max(hi, finite_hi(*s->core, grid.tail_probability));
    }
    const std::size_t n = std::max<std::size_t>(grid.points, 2);
    points.reserve(n + 8);
    for (std::size_t i = 0; i < n; ++i) {
      const double frac = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      points.push_back(lo + (hi - lo) * frac);
    }
    // mixed pairs: sample exactly at the atoms and just below them so CDF
    // jumps are seen by the dominance scan
    for (const Side* s : {&s0, &s1}) {
      if (s->degenerate_core() || !s->core->atomic()) continue;
      for (const auto& a : s->core->atoms()) {
        points.push_back(a.value);
        points.push_back(std::nextafter(a.value, -kInf));
      }
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

Ordering resolve(double viol01, double viol10, double tol) {
  if (viol01 <= tol && viol10 <= tol) return Ordering::Equal;
  if (viol01 <= tol) return Ordering::FirstDominates;
  if (viol10 <= tol) return Ordering::SecondDominates;
  return Ordering::Neither;
}

// Analytic MLRP for the closed-form parametric families. Empty when the pair
// is outside the closed-form list.
std::optional<Ordering> analytic_mlrp(const RiskDistribution& d0, const RiskDistribution& d1) {
  using Kind = RiskDistribution::Kind;
  if (d0.kind() != d1.kind()) return std::nullopt;
  switch (d0.kind()) {
    case Kind::Beta: {
      const auto &p0 = d0.beta_params(), &p1 = d1.beta_params();
      const bool fwd = p0.alpha >= p1.alpha && p0.beta <= p1.beta;
      const bool rev = p1.alpha >= p0.alpha && p1.beta <= p0.beta;
      if (fwd && rev) return Ordering::Equal;
      if (fwd) return Ordering::FirstDominates;
      if (rev) return Ordering::SecondDominates;
      return Ordering::Neither;  // the parameter condition is also necessary
    }
    case Kind::Gamma: {
      const auto &p0 = d0.gamma_params(), &p1 = d1.gamma_params();
      const bool fwd = p0.shape >= p1.shape && p0.rate <= p1.rate;
      const bool rev = p1.shape >= p0.shape && p1.rate <= p0.rate;
      if (fwd && rev) return Ordering::Equal;
      if (fwd) return Ordering::FirstDominates;
      if (rev) return Ordering::SecondDominates;
      return Ordering::Neither;
    }
    case Kind::Normal: {
      const auto &p0 = d0.normal_params(), &p1 = d1.normal_params();
      if (p0.variance != p1.variance) return Ordering::Neither;  // ratio is not monotone
      if (p0.mean == p1.mean) return Ordering::Equal;
      return p0.mean > p1.mean ? Ordering::FirstDominates : Ordering::SecondDominates;
    }
    case Kind::Binomial: {
      const auto &p0 = d0.binomial_params(), &p1 = d1.binomial_params();
      if (p0.trials != p1.trials) return std::nullopt;
      if (p0.p == p1.p) return Ordering::Equal;
      return p0.p > p1.p ? Ordering::FirstDominates : Ordering::SecondDominates;
    }
    case Kind::Transformed: {
      const auto &p0 = d0.transformed_params(), &p1 = d1.transformed_params();
      // the MLRP is preserved by monotone transformations
      if (p0.map.kind() != p1.map.kind()) return std::nullopt;
      if (p0.map.scale() != p1.map.scale() || p0.map.shift() != p1.map.shift())
        return std::nullopt;
      return analytic_mlrp(*p0.base, *p1.base);
    }
    default:
      return std::nullopt;
  }
}

OrderingReport ordered_compare(const Side& s0, const Side& s1, const GridSpec& grid) {
  const bool cont0 = !s0.degenerate_core() && !s0.core->atomic();
  const bool cont1 = !s1.degenerate_core() && !s1.core->atomic();
  if (cont0 && cont1) {
    const bool disjoint = s0.core->support_hi() < s1.core->support_lo() ||
                          s1.core->support_hi() < s0.core->support_lo();
    if (disjoint) throw IncompatibleSupports("risk distribution supports do not overlap");
  }

  const std::vector<double> points = build_points(s0, s1, grid);

  OrderingReport report;
  report.grid_size = points.size();

  // Stochastic dominance: scan the CDFs, plus the extended endpoints.
  double viol01 = std::max(0.0, s0.mass_minus - s1.mass_minus);
  double viol10 = std::max(0.0, s1.mass_minus - s0.mass_minus);
  viol01 = std::max(viol01, s1.mass_plus - s0.mass_plus);
  viol10 = std::max(viol10, s0.mass_plus - s1.mass_plus);
  for (double x : points) {
    const double f0 = s0.cdf_at(x);
    const double f1 = s1.cdf_at(x);
    viol01 = std::max(viol01, f0 - f1);
    viol10 = std::max(viol10, f1 - f0);
  }
  report.stochastic_dominance = resolve(viol01, viol10, grid.tolerance);
  report.max_cdf_violation = std::min(viol01, viol10);

  // Likelihood-ratio monotonicity on the density sequence, with the extended
  // endpoint masses as the first and last entries.
  std::vector<std::pair<double, double>> seq;
  seq.reserve(points.size() + 2);
  if (s0.mass_minus > 0.0 || s1.mass_minus > 0.0) seq.emplace_back(s0.mass_minus, s1.mass_minus);
  for (double x : points) {
    const double f0 = s0.density_at(x);
    const double f1 = s1.density_at(x);
    if (f0 <= 0.0 && f1 <= 0.0) continue;  // both vanish: mu-null, skipped
    seq.emplace_back(f0, f1);
  }
  if (s0.mass_plus > 0.0 || s1.mass_plus > 0.0) seq.emplace_back(s0.mass_plus, s1.mass_plus);

  double inv01 = 0.0, inv10 = 0.0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const auto [a0, a1] = seq[i];
    const auto [b0, b1] = seq[i + 1];
    // f0/f1 non-decreasing across the pair  <=>  a0*b1 <= b0*a1
    const double lhs = a0 * b1;
    const double rhs = b0 * a1;
    const double scale = lhs + rhs;
    if (scale <= 0.0) continue;
    inv01 = std::max(inv01, (lhs - rhs) / scale);
    inv10 = std::max(inv10, (rhs - lhs) / scale);
  }
  report.max_likelihood_ratio_inversion = std::min(inv01, inv10);

  Ordering mlrp = resolve(inv01, inv10, grid.tolerance);
  // A constant ratio only means equality when the CDFs agree; otherwise align
  // with the dominance scan. A conclusive ratio direction that contradicts
  // dominance is grid noise and is demoted.
  if (mlrp == Ordering::Equal && report.stochastic_dominance != Ordering::Equal)
    mlrp = report.stochastic_dominance;
  if (mlrp == Ordering::FirstDominates &&
      report.stochastic_dominance == Ordering::SecondDominates)
    mlrp = Ordering::Neither;
  if (mlrp == Ordering::SecondDominates &&
      report.stochastic_dominance == Ordering::FirstDominates)
    mlrp = Ordering::Neither;
  report.mlrp = mlrp;
  return report;
}

}  // namespace

OrderingReport check_ordering(const RiskDistribution& d0, const RiskDistribution& d1,
                              const GridSpec& grid) {
  Side s0{&d0, 1.0, 0.0, 0.0};
  Side s1{&d1, 1.0, 0.0, 0.0};
  OrderingReport report = ordered_compare(s0, s1, grid);
  if (auto closed_form = analytic_mlrp(d0, d1)) report.mlrp = *closed_form;
  return report;
}

ExtendedDistribution make_extended(RiskDistribution core, double mass_minus_inf,
                                   double mass_plus_inf) {
  if (mass_minus_inf < 0.0 || mass_plus_inf < 0.0 ||
      mass_minus_inf + mass_plus_inf > 1.0 + 1e-12)
    throw InvalidDistribution("extended endpoint masses must be >= 0 and sum to <= 1");
  return ExtendedDistribution{std::move(core), mass_minus_inf, mass_plus_inf};
}

double cdf(const ExtendedDistribution& dist, double x) {
  if (x == kInf) return 1.0;
  const double w = dist.core_weight();
  if (w <= 0.0) return dist.mass_at_minus_infinity;
  return dist.mass_at_minus_infinity + w * cdf(dist.core, x);
}

OrderingReport check_ordering(const ExtendedDistribution& d0, const ExtendedDistribution& d1,
                              const GridSpec& grid) {
  Side s0{&d0.core, d0.core_weight(), d0.mass_at_minus_infinity, d0.mass_at_plus_infinity};
  Side s1{&d1.core, d1.core_weight(), d1.mass_at_minus_infinity, d1.mass_at_plus_infinity};
  OrderingReport report = ordered_compare(s0, s1, grid);
  // closed forms apply when the cores carry all the mass
  if (d0.mass_at_minus_infinity == 0.0 && d0.mass_at_plus_infinity == 0.0 &&
      d1.mass_at_minus_infinity == 0.0 && d1.mass_at_plus_infinity == 0.0) {
    if (auto closed_form = analytic_mlrp(d0.core, d1.core)) report.mlrp = *closed_form;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Binned posterior
// ---------------------------------------------------------------------------

std::vector<PosteriorBin> binned_posterior(const GroupedSample& sample, std::size_t bins,
                                           std::size_t min_count) {
  if (bins < 2) throw Error("binned_posterior: bins must be >= 2");
  if (sample.rows.empty()) throw MissingRiskScores("binned_posterior requires a non-empty sample");
  if (!sample.has_all_risks())
    throw MissingRiskScores("binned_posterior requires a risk score on every row");

  struct Entry {
    double risk;
    int group;
  };
  std::vector<Entry> entries;
  entries.reserve(sample.rows.size());
  for (const auto& r : sample.rows) entries.push_back({*r.risk, r.group});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.risk < b.risk; });

  const std::size_t n = entries.size();
  const std::size_t base = n / bins;
  const std::size_t rem = n % bins;
  const std::size_t min_keep = std::max<std::size_t>(1, min_count);

  std::vector<PosteriorBin> out;
  double risk_sum = 0.0;
  std::size_t count = 0, ones = 0, cursor = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t width = base + (b < rem ? 1 : 0);
    for (std::size_t i = 0; i < width; ++i, ++cursor) {
      risk_sum += entries[cursor].risk;
      ones += (entries[cursor].group == 1);
      ++count;
    }
    if (count >= min_keep) {
      out.push_back({risk_sum / static_cast<double>(count),
                     static_cast<double>(ones) / static_cast<double>(count), count});
      risk_sum = 0.0;
      count = 0;
      ones = 0;
    }
    // below min-count: carry the rows rightward into the next bin
  }
  if (count > 0) {
    if (!out.empty()) {
      // trailing remainder merges into the previous bin
      PosteriorBin& prev = out.back();
      const double prev_sum = prev.risk_center * static_cast<double>(prev.count);
      const double prev_ones = prev.group1_share * static_cast<double>(prev.count);
      prev.count += count;
      prev.risk_center = (prev_sum + risk_sum) / static_cast<double>(prev.count);
      prev.group1_share =
          (prev_ones + static_cast<double>(ones)) / static_cast<double>(prev.count);
    } else {
      out.push_back({risk_sum / static_cast<double>(count),
                     static_cast<double>(ones) / static_cast<double>(count), count});
    }
  }
  return out;
}

}  // namespace rotest
