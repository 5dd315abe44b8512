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

#ifndef ROTEST_DISTRIBUTIONS_HPP
#define ROTEST_DISTRIBUTIONS_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "rotest/errors.hpp"
#include "rotest/sample.hpp"

namespace rotest {

// ---------------------------------------------------------------------------
// Risk distributions
// ---------------------------------------------------------------------------

/// A point mass of a discrete distribution.
struct Atom {
  double value = 0.0;
  double mass = 0.0;
};

/// A named strictly increasing map, used to push a distribution forward.
class MonotoneTransform {
 public:
  enum class Kind { Log, Logit, Affine };

  static MonotoneTransform log() { return MonotoneTransform(Kind::Log, 1.0, 0.0); }
  static MonotoneTransform logit() { return MonotoneTransform(Kind::Logit, 1.0, 0.0); }
  static MonotoneTransform affine(double scale, double shift);

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  double shift() const { return shift_; }

  double forward(double x) const;
  double inverse(double y) const;
  /// d/dy of the inverse map; the Jacobian for density change of variables.
  double inverse_derivative(double y) const;

 private:
  MonotoneTransform(Kind kind, double scale, double shift)
      : kind_(kind), scale_(scale), shift_(shift) {}

  Kind kind_;
  double scale_, shift_;
};

/// One-dimensional distribution of a risk score or general utility.
///
/// Values are immutable after construction and every operation on them is a
/// pure function, so they can be shared freely across threads. Discrete,
/// empirical, and binomial distributions are materialized as sorted atoms,
/// which keeps ordering checks and tilts on them exact.
///
/// Tilting a non-atomic distribution yields the internal Tilted kind, whose
/// CDF and moments are evaluated by quadrature against the base distribution;
/// it supports every operation except JSON serialization.
class RiskDistribution {
 public:
  enum class Kind { Beta, Normal, Gamma, Binomial, Discrete, Empirical, Transformed, Tilted };

  struct BetaParams {
    double alpha, beta;
  };
  struct NormalParams {
    double mean, variance;
  };
  struct GammaParams {
    double shape, rate;  // density ~ x^{shape-1} e^{-rate x}
  };
  struct BinomialParams {
    int trials;
    double p;
  };
  struct TransformedParams {
    std::shared_ptr<const RiskDistribution> base;
    MonotoneTransform map;
  };
  struct TiltedParams {
    std::shared_ptr<const RiskDistribution> base;
    std::function<double(double)> weight;
    double normalizer;  // E[weight(X)] under the base
  };

  static RiskDistribution beta(double alpha, double beta);
  static RiskDistribution normal(double mean, double variance);
  static RiskDistribution gamma(double shape, double rate);
  static RiskDistribution binomial(int trials, double p);
  static RiskDistribution discrete(std::vector<double> values, std::vector<double> masses);
  /// Unweighted or weighted observations; sorted and merged into atoms.
  static RiskDistribution empirical(std::vector<double> samples,
                                    std::vector<double> weights = {});
  static RiskDistribution transformed(RiskDistribution base, MonotoneTransform map);

  Kind kind() const { return kind_; }

  /// True when the distribution is a finite collection of point masses.
  bool atomic() const { return !atoms_.empty(); }
  const std::vector<Atom>& atoms() const;

  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }

  const BetaParams& beta_params() const { return std::get<BetaParams>(params_); }
  const NormalParams& normal_params() const { return std::get<NormalParams>(params_); }
  const GammaParams& gamma_params() const { return std::get<GammaParams>(params_); }
  const BinomialParams& binomial_params() const { return std::get<BinomialParams>(params_); }
  const TransformedParams& transformed_params() const {
    return std::get<TransformedParams>(params_);
  }
  const TiltedParams& tilted_params() const { return std::get<TiltedParams>(params_); }

 private:
  friend RiskDistribution tilt(const RiskDistribution&, const std::function<double(double)>&);

  using Params = std::variant<BetaParams, NormalParams, GammaParams, BinomialParams,
                              TransformedParams, TiltedParams, std::monostate>;

  RiskDistribution(Kind kind, Params params) : kind_(kind), params_(std::move(params)) {}

  void finalize_atoms(std::vector<Atom> atoms, Kind kind);

  Kind kind_;
  Params params_;
  std::vector<Atom> atoms_;      // populated for atomic kinds
  std::vector<double> cum_;      // cumulative masses alongside atoms_
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
};

double cdf(const RiskDistribution& dist, double x);

/// Lebesgue density for continuous kinds; for atomic kinds, the mass placed
/// exactly at x (zero elsewhere). Ordering checks rely on the latter.
double density(const RiskDistribution& dist, double x);

/// Mass placed exactly at x (zero for continuous kinds).
double mass_at(const RiskDistribution& dist, double x);

/// Left-continuous inverse CDF: the smallest x with cdf(x) >= p.
double quantile(const RiskDistribution& dist, double p);

double mean(const RiskDistribution& dist);
double variance(const RiskDistribution& dist);

/// Pr(X >= t); counts mass located exactly at t.
double tail_mass(const RiskDistribution& dist, double t);

/// E[X | X >= t]. Throws ZeroMassAboveThreshold when Pr(X >= t) = 0.
double conditional_mean_above(const RiskDistribution& dist, double t);

/// Reweights the distribution by a nonnegative function and renormalizes.
/// Atomic inputs are reweighted exactly; continuous inputs are represented
/// through quadrature against the base. Throws DegenerateTilt when
/// E[weight(X)] is zero or non-finite.
RiskDistribution tilt(const RiskDistribution& dist, const std::function<double(double)>& weight);

// ---------------------------------------------------------------------------
// Stochastic-ordering checks
// ---------------------------------------------------------------------------

struct GridSpec {
  std::size_t points = 1001;      // evaluation points for non-atomic pairs
  double tolerance = 1e-9;        // monotonicity / dominance slack
  double tail_probability = 1e-10;  // quantile clip for unbounded supports
};

enum class Ordering { FirstDominates, SecondDominates, Neither, Equal };

std::string to_string(Ordering o);

/// Result of comparing two distributions.
///
/// max_cdf_violation and max_likelihood_ratio_inversion measure how far the
/// pair is from the nearest dominance (resp. monotone-ratio) hypothesis: both
/// are 0 up to tolerance when the corresponding field is conclusive. Ratio
/// inversions are reported in relative cross-product form,
///   (f0(x) f1(y) - f0(y) f1(x)) / (f0(x) f1(y) + f0(y) f1(x))   for x < y,
/// which is exact on atoms and handles vanishing densities per the convention
/// that the ratio is +inf where the second density is zero.
struct OrderingReport {
  Ordering stochastic_dominance = Ordering::Neither;
  Ordering mlrp = Ordering::Neither;
  double max_cdf_violation = 0.0;
  double max_likelihood_ratio_inversion = 0.0;
  std::size_t grid_size = 0;
};

/// Compares two risk distributions for stochastic dominance and the MLRP.
///
/// Parametric pairs from the same family are decided in closed form
/// (Beta: a0 >= a1 and b0 <= b1; equal-variance Normal: mu0 >= mu1;
/// Gamma: a0 >= a1 and rate0 <= rate1; Binomial with equal trials: p0 >= p1;
/// same-map transformed pairs recurse to their bases). Atomic pairs are
/// checked exactly on the union of their supports. Everything else is checked
/// on a discretized grid up to the given tolerance.
///
/// Throws IncompatibleSupports when two non-atomic supports do not overlap.
OrderingReport check_ordering(const RiskDistribution& d0, const RiskDistribution& d1,
                              const GridSpec& grid = {});

// ---------------------------------------------------------------------------
// Extended-real distributions
// ---------------------------------------------------------------------------

/// A distribution on the extended reals: a core on R plus point masses at
/// -inf and +inf. The three pieces sum to one.
struct ExtendedDistribution {
  RiskDistribution core;
  double mass_at_minus_infinity = 0.0;
  double mass_at_plus_infinity = 0.0;

  double core_weight() const { return 1.0 - mass_at_minus_infinity - mass_at_plus_infinity; }
};

ExtendedDistribution make_extended(RiskDistribution core, double mass_minus_inf = 0.0,
                                   double mass_plus_inf = 0.0);

double cdf(const ExtendedDistribution& dist, double x);

OrderingReport check_ordering(const ExtendedDistribution& d0, const ExtendedDistribution& d1,
                              const GridSpec& grid = {});

// ---------------------------------------------------------------------------
// Binned posterior curve
// ---------------------------------------------------------------------------

struct PosteriorBin {
  double risk_center = 0.0;   // mean risk of the rows in the bin
  double group1_share = 0.0;  // Pr(G = 1 | R in bin)
  std::size_t count = 0;
};

/// Equal-count bins of the pooled risk scores, reporting the group-1 fraction
/// per bin. Bins below min_count are merged into their right neighbor (the
/// trailing bin merges left). Throws MissingRiskScores if any row lacks a
/// risk score.
std::vector<PosteriorBin> binned_posterior(const GroupedSample& sample, std::size_t bins,
                                           std::size_t min_count = 50);

}  // namespace rotest

#endif  // ROTEST_DISTRIBUTIONS_HPP
