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

#include "rotest/audit.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "rotest/csv.hpp"

namespace rotest {

namespace {

using nlohmann::json;

// normalize a double to the emitters' 10-significant-digit convention
json json_number(double v) { return json::parse(format_double(v)); }

void check_group_map(const GroupMap& groups) {
  if (groups.label0.empty() || groups.label1.empty())
    throw ValueError("both group labels must be configured");
  if (groups.label0 == groups.label1)
    throw ValueError("the two group labels must differ");
  for (const auto* label : {&groups.label0, &groups.label1})
    if (label->find(',') != std::string::npos)
      throw ValueError("group labels must not contain commas");
}

}  // namespace

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

AuditInput ingest_csv(std::istream& in, const IngestOptions& options) {
  check_group_map(options.groups);
  const CsvTable table = read_csv(in);

  AuditInput input;
  input.groups = options.groups;

  const bool unit_level = table.column("decision").has_value();
  const bool aggregate = table.column("n_positive").has_value();
  if (!unit_level && !aggregate)
    throw SchemaError("header matches neither the unit-level schema (needs 'decision') "
                      "nor the aggregate schema (needs 'n_positive')");
  input.mode = unit_level ? InputMode::UnitLevel : InputMode::Aggregate;

  const std::size_t col_unit = table.require_column("unit_id");
  const std::size_t col_group = table.require_column("group");

  const auto map_group = [&](const std::string& label) -> int {
    if (label == options.groups.label0) return 0;
    if (label == options.groups.label1) return 1;
    return -1;
  };

  std::map<std::string, UnitData> units;

  if (input.mode == InputMode::UnitLevel) {
    const std::size_t col_decision = table.require_column("decision");
    const std::size_t col_outcome = table.require_column("outcome");
    const auto col_risk = table.column("risk");

    std::size_t line_no = 1;  // header was line 1
    for (const auto& row : table.rows) {
      ++line_no;
      const std::string where = "row " + std::to_string(line_no);
      const int group = map_group(row[col_group]);
      if (group < 0) {
        ++input.dropped_unmapped_rows;
        continue;
      }
      SampleRow r;
      r.group = group;
      const std::string& decision = row[col_decision];
      if (decision == "0")
        r.decision = 0;
      else if (decision == "1")
        r.decision = 1;
      else
        throw ValueError(where + ": decision must be 0 or 1, got '" + decision + "'");
      const std::string& outcome = row[col_outcome];
      if (outcome.empty()) {
        if (r.decision == 1)
          throw ValueError(where + ": outcome required when decision = 1");
      } else {
        r.outcome = parse_double(outcome, where + " outcome");
      }
      if (col_risk && !row[*col_risk].empty())
        r.risk = parse_double(row[*col_risk], where + " risk");

      UnitData& unit = units[row[col_unit]];
      unit.unit_id = row[col_unit];
      unit.sample.rows.push_back(r);
    }
  } else {
    const std::size_t col_n = table.require_column("n");
    const std::size_t col_np = table.require_column("n_positive");
    const std::size_t col_sum = table.require_column("outcome_sum");
    const std::size_t col_sumsq = table.require_column("outcome_sum_sq");

    std::size_t line_no = 1;
    for (const auto& row : table.rows) {
      ++line_no;
      const std::string where = "row " + std::to_string(line_no);
      const int group = map_group(row[col_group]);
      if (group < 0) {
        ++input.dropped_unmapped_rows;
        continue;
      }
      AggregateCounts counts;
      counts.present = true;
      counts.n = parse_count(row[col_n], where + " n");
      counts.n_positive = parse_count(row[col_np], where + " n_positive");
      if (counts.n_positive > counts.n)
        throw ValueError(where + ": n_positive exceeds n");
      counts.outcome_sum = parse_double(row[col_sum], where + " outcome_sum");
      counts.outcome_sum_sq = parse_double(row[col_sumsq], where + " outcome_sum_sq");

      UnitData& unit = units[row[col_unit]];
      unit.unit_id = row[col_unit];
      if (unit.aggregate[static_cast<std::size_t>(group)].present)
        throw ValueError(where + ": duplicate aggregate row for unit '" + row[col_unit] +
                         "' group '" + row[col_group] + "'");
      unit.aggregate[static_cast<std::size_t>(group)] = counts;
    }
  }

  for (auto& [id, unit] : units) {
    if (options.min_count_per_group > 0) {
      std::size_t n0, n1;
      if (input.mode == InputMode::UnitLevel) {
        n0 = unit.sample.count(0);
        n1 = unit.sample.count(1);
      } else {
        n0 = unit.aggregate[0].n;
        n1 = unit.aggregate[1].n;
      }
      if (n0 < options.min_count_per_group || n1 < options.min_count_per_group) {
        ++input.filtered_units;
        continue;
      }
    }
    input.units.push_back(std::move(unit));
  }
  if (input.units.empty()) throw EmptyAfterFilter("no units remain after filtering");
  return input;  // std::map iteration already sorted by unit_id
}

AuditInput ingest(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return ingest_csv(in, options);
}

// ---------------------------------------------------------------------------
// Audit pipeline
// ---------------------------------------------------------------------------

std::string to_string(Quadrant q) {
  switch (q) {
    case Quadrant::DiscrimG1:
      return "discrim_g1";
    case Quadrant::DiscrimG0:
      return "discrim_g0";
    case Quadrant::InconclusiveBothHigh:
      return "inconclusive_both_high";
    case Quadrant::InconclusiveBothLow:
      return "inconclusive_both_low";
  }
  return "?";
}

Quadrant quadrant_of(const DeltaEstimates& delta, DecisionPolarity polarity) {
  const bool desirable = polarity == DecisionPolarity::PositiveDesirable;
  if (delta.delta_dr < 0.0 && delta.delta_or > 0.0)
    return desirable ? Quadrant::DiscrimG1 : Quadrant::DiscrimG0;
  if (delta.delta_dr > 0.0 && delta.delta_or < 0.0)
    return desirable ? Quadrant::DiscrimG0 : Quadrant::DiscrimG1;
  if (delta.delta_dr >= 0.0 && delta.delta_or >= 0.0) return Quadrant::InconclusiveBothHigh;
  return Quadrant::InconclusiveBothLow;
}

AuditReport run_audit(const AuditInput& input, const AuditOptions& options) {
  AuditReport report;
  report.groups = input.groups;
  report.polarity = options.polarity;
  report.alpha = options.mode.alpha;
  report.dropped_unmapped_rows = input.dropped_unmapped_rows;
  report.filtered_units = input.filtered_units;

  for (const auto& unit : input.units) {
    UnitReport r;
    r.unit_id = unit.unit_id;
    try {
      RateSummary s0, s1;
      if (input.mode == InputMode::UnitLevel) {
        s0 = estimate_rates(unit.sample, 0, options.denominator);
        s1 = estimate_rates(unit.sample, 1, options.denominator);
      } else {
        for (int g = 0; g <= 1; ++g)
          if (!unit.aggregate[static_cast<std::size_t>(g)].present)
            throw EmptyGroup("group " + std::to_string(g) + " has no aggregate row");
        const auto& a0 = unit.aggregate[0];
        const auto& a1 = unit.aggregate[1];
        s0 = summary_from_counts(0, a0.n, a0.n_positive, a0.outcome_sum, a0.outcome_sum_sq,
                                 options.denominator);
        s1 = summary_from_counts(1, a1.n, a1.n_positive, a1.outcome_sum, a1.outcome_sum_sq,
                                 options.denominator);
      }
      r.n_total = s0.n + s1.n;
      r.rates0 = s0;
      r.rates1 = s1;

      const DeltaEstimates delta = delta_with_errors(s0, s1);
      r.delta = delta;
      r.benchmark = benchmark_test(delta, options.polarity, options.mode);
      r.standard = standard_outcome_test(delta, options.polarity, options.mode);
      r.robust = robust_outcome_test(delta, options.polarity, options.mode);
      r.quadrant = quadrant_of(delta, options.polarity);
      if (options.mode.alpha) {
        r.robust_p = r.robust->p_value;
        r.region = confidence_region(delta, *options.mode.alpha);
      }
      if (input.mode == InputMode::UnitLevel && unit.sample.has_all_risks()) {
        try {
          r.monotonicity = monotonicity_violation(unit.sample, options.monotonicity_bins,
                                                  options.min_bin_count);
        } catch (const Error&) {
          // diagnostics are best-effort; the audit verdicts stand on their own
        }
      }
    } catch (const Error& e) {
      r.error = e.what();
    }

    if (r.error) {
      ++report.errored;
    } else {
      switch (r.robust->discrimination_against) {
        case DiscriminationAgainst::Group0:
          ++report.flagged_against_group0;
          break;
        case DiscriminationAgainst::Group1:
          ++report.flagged_against_group1;
          break;
        case DiscriminationAgainst::None:
          ++report.inconclusive;
          break;
      }
    }
    report.units.push_back(std::move(r));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

json summary_to_json(const RateSummary& s) {
  json j;
  j["group"] = s.group;
  j["n"] = s.n;
  j["n_positive"] = s.n_positive;
  j["decision_rate"] = json_number(s.decision_rate);
  j["se_decision_rate"] = json_number(s.se_decision_rate);
  j["outcome_rate"] = s.outcome_rate ? json_number(*s.outcome_rate) : json();
  j["outcome_sample_variance"] =
      s.outcome_sample_variance ? json_number(*s.outcome_sample_variance) : json();
  j["se_outcome_rate"] = s.se_outcome_rate ? json_number(*s.se_outcome_rate) : json();
  return j;
}

json verdict_to_json_local(const Verdict& v) {
  json j;
  j["test"] = to_string(v.test);
  j["conclusion"] = to_string(v.conclusion);
  j["discrimination_against"] = to_string(v.discrimination_against);
  j["mode"] = v.alpha ? "significance" : "point";
  if (v.alpha) j["alpha"] = json_number(*v.alpha);
  j["p_value"] = v.p_value ? json_number(*v.p_value) : json();
  return j;
}

}  // namespace

void emit_json(const AuditReport& report, std::ostream& out) {
  json j;
  j["group_labels"] = {{"group0", report.groups.label0}, {"group1", report.groups.label1}};
  j["polarity"] = to_string(report.polarity);
  j["mode"] = report.alpha ? "significance" : "point";
  if (report.alpha) j["alpha"] = json_number(*report.alpha);
  j["tallies"] = {{"against_group0", report.flagged_against_group0},
                  {"against_group1", report.flagged_against_group1},
                  {"inconclusive", report.inconclusive},
                  {"errored", report.errored},
                  {"dropped_unmapped_rows", report.dropped_unmapped_rows},
                  {"filtered_units", report.filtered_units}};

  json units = json::array();
  for (const auto& u : report.units) {
    json ju;
    ju["unit_id"] = u.unit_id;
    ju["n_total"] = u.n_total;
    if (u.error) {
      ju["error"] = *u.error;
      units.push_back(std::move(ju));
      continue;
    }
    ju["rates"] = {summary_to_json(*u.rates0), summary_to_json(*u.rates1)};
    ju["delta_dr"] = json_number(u.delta->delta_dr);
    ju["delta_or"] = json_number(u.delta->delta_or);
    ju["se_delta_dr"] = json_number(u.delta->se_delta_dr);
    ju["se_delta_or"] = json_number(u.delta->se_delta_or);
    ju["verdicts"] = {verdict_to_json_local(*u.benchmark), verdict_to_json_local(*u.standard),
                      verdict_to_json_local(*u.robust)};
    ju["quadrant"] = to_string(*u.quadrant);
    if (u.region) {
      ju["confidence_region"] = {{"center_dr", json_number(u.region->center_dr)},
                                 {"center_or", json_number(u.region->center_or)},
                                 {"se_dr", json_number(u.region->se_dr)},
                                 {"se_or", json_number(u.region->se_or)},
                                 {"radius_squared", json_number(u.region->radius_squared)},
                                 {"alpha", json_number(u.region->alpha)}};
    }
    if (u.monotonicity) {
      json curve = json::array();
      for (const auto& bin : u.monotonicity->curve)
        curve.push_back({{"risk", json_number(bin.risk_center)},
                         {"group1_share", json_number(bin.group1_share)},
                         {"count", bin.count}});
      ju["monotonicity"] = {{"score", json_number(u.monotonicity->violation_score)},
                            {"direction", to_string(u.monotonicity->direction)},
                            {"degenerate", u.monotonicity->degenerate},
                            {"curve", std::move(curve)}};
    }
    units.push_back(std::move(ju));
  }
  j["units"] = std::move(units);
  out << j.dump(2) << '\n';
}

void emit_csv(const AuditReport& report, std::ostream& out) {
  out << "unit_id,n_total,n_g0,n_g1,dr_g0,dr_g1,or_g0,or_g1,delta_dr,delta_or,"
         "se_delta_dr,se_delta_or,benchmark,standard,robust,discrimination_against,"
         "p_robust,monotonicity_score,quadrant,error\n";
  for (const auto& u : report.units) {
    out << u.unit_id << ',' << u.n_total << ',';
    if (u.error) {
      std::string sanitized = *u.error;
      std::replace(sanitized.begin(), sanitized.end(), ',', ';');
      out << ",,,,,,,,,,,,,,,,," << sanitized << '\n';
      continue;
    }
    out << u.rates0->n << ',' << u.rates1->n << ',' << format_double(u.rates0->decision_rate)
        << ',' << format_double(u.rates1->decision_rate) << ','
        << format_double(*u.rates0->outcome_rate) << ',' << format_double(*u.rates1->outcome_rate)
        << ',' << format_double(u.delta->delta_dr) << ',' << format_double(u.delta->delta_or)
        << ',' << format_double(u.delta->se_delta_dr) << ','
        << format_double(u.delta->se_delta_or) << ',' << to_string(u.benchmark->conclusion) << ','
        << to_string(u.standard->conclusion) << ',' << to_string(u.robust->conclusion) << ','
        << to_string(u.robust->discrimination_against) << ','
        << (u.robust_p ? format_double(*u.robust_p) : std::string()) << ','
        << (u.monotonicity ? format_double(u.monotonicity->violation_score) : std::string())
        << ',' << to_string(*u.quadrant) << ",\n";
  }
}

void emit_plot_csv(const AuditReport& report, std::ostream& out) {
  out << "unit_id,n_stops,delta_dr,delta_or,quadrant\n";
  for (const auto& u : report.units) {
    if (u.error) continue;
    out << u.unit_id << ',' << u.n_total << ',' << format_double(u.delta->delta_dr) << ','
        << format_double(u.delta->delta_or) << ',' << to_string(*u.quadrant) << '\n';
  }
}

void emit_aggregate_csv(const AuditInput& input, std::ostream& out) {
  out << "unit_id,group,n,n_positive,outcome_sum,outcome_sum_sq\n";
  for (const auto& unit : input.units) {
    for (int g = 0; g <= 1; ++g) {
      const std::string& label = g == 0 ? input.groups.label0 : input.groups.label1;
      std::size_t n = 0, np = 0;
      double sum = 0.0, sumsq = 0.0;
      if (input.mode == InputMode::Aggregate) {
        const auto& counts = unit.aggregate[static_cast<std::size_t>(g)];
        if (!counts.present) continue;
        n = counts.n;
        np = counts.n_positive;
        sum = counts.outcome_sum;
        sumsq = counts.outcome_sum_sq;
      } else {
        for (const auto& row : unit.sample.rows) {
          if (row.group != g) continue;
          ++n;
          if (row.decision == 1) {
            ++np;
            sum += *row.outcome;
            sumsq += *row.outcome * *row.outcome;
          }
        }
        if (n == 0) continue;
      }
      out << unit.unit_id << ',' << label << ',' << n << ',' << np << ',' << format_double(sum)
          << ',' << format_double(sumsq) << '\n';
    }
  }
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace rotest
