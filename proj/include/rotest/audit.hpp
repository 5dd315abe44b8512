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

#ifndef ROTEST_AUDIT_HPP
#define ROTEST_AUDIT_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rotest/diagnostics.hpp"
#include "rotest/estimation.hpp"
#include "rotest/polarity.hpp"
#include "rotest/sample.hpp"
#include "rotest/verdicts.hpp"

namespace rotest {

/// Maps the two source group labels onto groups 0 and 1.
struct GroupMap {
  std::string label0, label1;
};

enum class InputMode { UnitLevel, Aggregate };

struct AggregateCounts {
  bool present = false;
  std::size_t n = 0;
  std::size_t n_positive = 0;
  double outcome_sum = 0.0;
  double outcome_sum_sq = 0.0;
};

/// One audited unit (e.g. one agency): either unit-level rows or per-group
/// aggregate counts, depending on the input mode.
struct UnitData {
  std::string unit_id;
  GroupedSample sample;                     // unit-level mode
  std::array<AggregateCounts, 2> aggregate{};  // aggregate mode
};

struct AuditInput {
  InputMode mode = InputMode::UnitLevel;
  GroupMap groups;
  std::vector<UnitData> units;  // sorted by unit_id
  std::size_t dropped_unmapped_rows = 0;
  std::size_t filtered_units = 0;  // excluded by the per-group minimum-count filter
};

struct IngestOptions {
  GroupMap groups;
  /// Units whose per-group row count (or aggregate n) falls below this are
  /// excluded. Zero disables the filter; audits of police-stop style data
  /// conventionally use 1000.
  std::size_t min_count_per_group = 0;
};

/// Reads a unit-level or aggregate CSV (the mode is detected from the
/// header), validates it, applies the group mapping and the optional
/// minimum-count filter. Rows with unmapped group labels are dropped and
/// counted. Throws SchemaError / ValueError / EmptyAfterFilter / IoError.
AuditInput ingest(const std::string& path, const IngestOptions& options);
AuditInput ingest_csv(std::istream& in, const IngestOptions& options);

/// The four sign quadrants of (delta_or, delta_dr) space, polarity-mapped:
/// the two discrimination quadrants and the two same-direction quadrants
/// where the robust test abstains.
enum class Quadrant { DiscrimG1, DiscrimG0, InconclusiveBothHigh, InconclusiveBothLow };

std::string to_string(Quadrant q);

Quadrant quadrant_of(const DeltaEstimates& delta, DecisionPolarity polarity);

struct UnitReport {
  std::string unit_id;
  std::size_t n_total = 0;
  std::optional<std::string> error;  // per-unit failure; other fields empty
  std::optional<RateSummary> rates0, rates1;
  std::optional<DeltaEstimates> delta;
  std::optional<Verdict> benchmark, standard, robust;
  std::optional<double> robust_p;           // significance mode
  std::optional<ConfidenceRegion> region;   // significance mode
  std::optional<MonotonicityReport> monotonicity;  // unit-level mode with risks
  std::optional<Quadrant> quadrant;
};

struct AuditReport {
  GroupMap groups;
  DecisionPolarity polarity = DecisionPolarity::PositiveDesirable;
  std::optional<double> alpha;
  std::vector<UnitReport> units;  // sorted by unit_id
  std::size_t flagged_against_group0 = 0;
  std::size_t flagged_against_group1 = 0;
  std::size_t inconclusive = 0;
  std::size_t errored = 0;
  std::size_t dropped_unmapped_rows = 0;
  std::size_t filtered_units = 0;
};

struct AuditOptions {
  DecisionPolarity polarity = DecisionPolarity::PositiveDesirable;
  VerdictMode mode = VerdictMode::point();
  VarianceDenominator denominator = VarianceDenominator::PositiveCount;
  std::size_t monotonicity_bins = 10;
  std::size_t min_bin_count = 50;
};

/// Runs the per-unit pipeline (rates, deltas, three verdicts, optional
/// significance machinery and monotonicity check). Per-unit failures are
/// recorded in the report and never abort other units.
AuditReport run_audit(const AuditInput& input, const AuditOptions& options = {});

void emit_json(const AuditReport& report, std::ostream& out);
void emit_csv(const AuditReport& report, std::ostream& out);
/// Scatter-plot data: unit_id, n_stops, delta_dr, delta_or, quadrant.
void emit_plot_csv(const AuditReport& report, std::ostream& out);
/// Re-emits the input in the aggregate CSV schema (unit-level inputs are
/// aggregated). ingest(emit(x)) reproduces x for aggregate inputs.
void emit_aggregate_csv(const AuditInput& input, std::ostream& out);

/// Writes through a callback; throws IoError when the path is unwritable.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer);

}  // namespace rotest

#endif  // ROTEST_AUDIT_HPP
