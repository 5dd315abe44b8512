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

#include "rotest/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace rotest {

std::string to_string(TrendDirection d) {
  return d == TrendDirection::Increasing ? "increasing" : "decreasing";
}

std::vector<double> isotonic_fit(const std::vector<double>& values,
                                 const std::vector<double>& weights, TrendDirection direction) {
  if (values.size() != weights.size()) throw Error("isotonic_fit: length mismatch");
  const std::size_t n = values.size();
  if (n == 0) return {};

  // Pool adjacent violators on blocks of (weighted mean, weight, span).
  struct Block {
    double mean, weight;
    std::size_t span;
  };
  const double sign = direction == TrendDirection::Increasing ? 1.0 : -1.0;
  std::vector<Block> blocks;
  blocks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0)) throw Error("isotonic_fit: weights must be positive");
    blocks.push_back({sign * values[i], weights[i], 1});
    while (blocks.size() >= 2 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      const double w = a.weight + b.weight;
      a.mean = (a.mean * a.weight + b.mean * b.weight) / w;
      a.weight = w;
      a.span += b.span;
    }
  }

  std::vector<double> fit;
  fit.reserve(n);
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.span; ++i) fit.push_back(sign * b.mean);
  return fit;
}

namespace {

double weighted_l1(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& w) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += w[i] * std::abs(a[i] - b[i]);
    den += w[i];
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

MonotonicityReport monotonicity_violation(const GroupedSample& sample, std::size_t bins,
                                          std::size_t min_bin_count) {
  MonotonicityReport report;
  report.curve = binned_posterior(sample, bins, min_bin_count);

  const std::size_t n = report.curve.size();
  std::vector<double> values(n), weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = report.curve[i].group1_share;
    weights[i] = static_cast<double>(report.curve[i].count);
  }

  const bool constant =
      std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
  if (n < 2 || constant) {
    report.degenerate = true;
    report.direction = TrendDirection::Increasing;
    report.isotonic = values;
    report.violation_score = 0.0;
    return report;
  }

  const std::vector<double> inc = isotonic_fit(values, weights, TrendDirection::Increasing);
  const std::vector<double> dec = isotonic_fit(values, weights, TrendDirection::Decreasing);
  const double dev_inc = weighted_l1(values, inc, weights);
  const double dev_dec = weighted_l1(values, dec, weights);
  const bool increasing = dev_inc <= dev_dec;
  report.direction = increasing ? TrendDirection::Increasing : TrendDirection::Decreasing;
  report.isotonic = increasing ? inc : dec;

  double wsum = 0.0, wmean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    wsum += weights[i];
    wmean += weights[i] * values[i];
  }
  wmean /= wsum;
  double dispersion = 0.0;
  for (std::size_t i = 0; i < n; ++i) dispersion += weights[i] * std::abs(values[i] - wmean);
  dispersion /= wsum;

  const double deviation = increasing ? dev_inc : dev_dec;
  report.violation_score = dispersion > 0.0 ? std::min(1.0, deviation / dispersion) : 0.0;
  return report;
}

}  // namespace rotest
