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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotest/audit.hpp"
#include "rotest/csv.hpp"
#include "rotest/diagnostics.hpp"
#include "rotest/oracle.hpp"
#include "rotest/serialize.hpp"
#include "rotest/simulation.hpp"
#include "rotest/verdicts.hpp"

namespace {

using namespace rotest;

struct CommonFlags {
  std::string input;
  std::string group0, group1;
  std::string polarity = "desirable";
  std::string mode = "point";
  double alpha = 0.05;
  std::size_t min_count = 0;
  std::size_t bins = 10;
  std::size_t min_bin_count = 50;
};

void add_group_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--input", flags.input, "input CSV path")->required();
  cmd->add_option("--group0", flags.group0, "source label mapped to group 0")->required();
  cmd->add_option("--group1", flags.group1, "source label mapped to group 1")->required();
}

void write_or_print(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-")
    writer(std::cout);
  else
    write_file(path, writer);
}

int run_audit_command(const CommonFlags& flags, const std::string& out,
                      const std::string& format, const std::string& plot_out,
                      const std::string& aggregate_out, const std::string& svar_denominator) {
  IngestOptions ingest_options;
  ingest_options.groups = GroupMap{flags.group0, flags.group1};
  ingest_options.min_count_per_group = flags.min_count;
  const AuditInput input = ingest(flags.input, ingest_options);

  AuditOptions options;
  options.polarity = polarity_from_string(flags.polarity);
  if (flags.mode == "significance")
    options.mode = VerdictMode::significance(flags.alpha);
  else if (flags.mode != "point")
    throw ValueError("mode must be point|significance");
  options.denominator = svar_denominator == "group" ? VarianceDenominator::GroupCount
                                                    : VarianceDenominator::PositiveCount;
  options.monotonicity_bins = flags.bins;
  options.min_bin_count = flags.min_bin_count;

  const AuditReport report = run_audit(input, options);

  if (format == "csv")
    write_or_print(out, [&](std::ostream& s) { emit_csv(report, s); });
  else
    write_or_print(out, [&](std::ostream& s) { emit_json(report, s); });
  if (!plot_out.empty()) write_file(plot_out, [&](std::ostream& s) { emit_plot_csv(report, s); });
  if (!aggregate_out.empty())
    write_file(aggregate_out, [&](std::ostream& s) { emit_aggregate_csv(input, s); });

  std::fprintf(stderr,
               "audited %zu units: against %s: %zu, against %s: %zu, inconclusive: %zu, "
               "errored: %zu (dropped rows: %zu, filtered units: %zu)\n",
               report.units.size(), report.groups.label1.c_str(), report.flagged_against_group1,
               report.groups.label0.c_str(), report.flagged_against_group0, report.inconclusive,
               report.errored, report.dropped_unmapped_rows, report.filtered_units);
  return 0;
}

int run_simulate_command(const std::string& preset_name, const std::string& config_path,
                         const CommonFlags& flags, const std::string& family, double sigma2,
                         bool sigma2_set, std::uint64_t seed, bool seed_set, bool per_group,
                         const std::string& out) {
  SimulationConfig config;
  if (!preset_name.empty()) {
    config = preset(preset_name);
  } else if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open '" + config_path + "' for reading");
    nlohmann::json j;
    in >> j;
    config = simulation_config_from_json(j);
  } else if (!flags.input.empty()) {
    if (flags.group0.empty() || flags.group1.empty())
      throw ValueError("simulate --input needs --group0 and --group1");
    IngestOptions ingest_options;
    ingest_options.groups = GroupMap{flags.group0, flags.group1};
    const AuditInput input = ingest(flags.input, ingest_options);
    GroupedSample pooled;
    for (const auto& unit : input.units)
      for (const auto& row : unit.sample.rows) pooled.rows.push_back(row);
    config.population = RiskPopulation::from_sample(std::move(pooled));
  } else {
    throw ValueError("simulate needs --preset, --config, or --input");
  }

  if (!family.empty()) config.family = policy_family_from_string(family);
  if (sigma2_set) config.sigma2 = sigma2;
  if (seed_set) config.seed = seed;
  if (per_group) config.per_group_percentiles = true;
  config.polarity = polarity_from_string(flags.polarity);

  const SimulationGrid grid = sweep(config);
  write_or_print(out, [&](std::ostream& s) { write_grid_csv(grid, s); });

  std::size_t robust_wrong = 0, robust_conclusive = 0, standard_wrong = 0, degenerate = 0;
  for (const auto& cell : grid.cells) {
    if (cell.degenerate) {
      ++degenerate;
      continue;
    }
    if (cell.robust != Conclusion::Inconclusive) ++robust_conclusive;
    robust_wrong += wrong_direction(cell.robust, cell.truth);
    standard_wrong += wrong_direction(cell.standard, cell.truth);
  }
  std::fprintf(stderr,
               "%zu cells: robust conclusive %zu (wrong %zu), standard wrong %zu, degenerate "
               "%zu\n",
               grid.cells.size(), robust_conclusive, robust_wrong, standard_wrong, degenerate);
  return 0;
}

int run_diagnose_command(const CommonFlags& flags, const std::string& out,
                         const std::string& curve_out) {
  IngestOptions ingest_options;
  ingest_options.groups = GroupMap{flags.group0, flags.group1};
  ingest_options.min_count_per_group = flags.min_count;
  const AuditInput input = ingest(flags.input, ingest_options);
  if (input.mode != InputMode::UnitLevel)
    throw ValueError("diagnose needs unit-level input with risk scores");

  nlohmann::json units = nlohmann::json::array();
  std::ostringstream curves;
  curves << "unit_id,bin_risk,group1_share,count\n";
  for (const auto& unit : input.units) {
    const MonotonicityReport report =
        monotonicity_violation(unit.sample, flags.bins, flags.min_bin_count);
    nlohmann::json ju;
    ju["unit_id"] = unit.unit_id;
    ju["violation_score"] = report.violation_score;
    ju["direction"] = to_string(report.direction);
    ju["degenerate"] = report.degenerate;
    nlohmann::json curve = nlohmann::json::array();
    for (std::size_t i = 0; i < report.curve.size(); ++i) {
      const auto& bin = report.curve[i];
      curve.push_back({{"risk", bin.risk_center},
                       {"group1_share", bin.group1_share},
                       {"count", bin.count},
                       {"isotonic", report.isotonic[i]}});
      curves << unit.unit_id << ',' << format_double(bin.risk_center) << ','
             << format_double(bin.group1_share) << ',' << bin.count << '\n';
    }
    ju["curve"] = std::move(curve);
    units.push_back(std::move(ju));
  }
  nlohmann::json j;
  j["units"] = std::move(units);
  write_or_print(out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
  if (!curve_out.empty()) write_file(curve_out, [&](std::ostream& s) { s << curves.str(); });
  return 0;
}

int run_oracle_command(const std::string& suite, std::size_t instances, std::uint64_t seed,
                       const std::string& out, bool restrict_mlrp,
                       const std::string& instance_path) {
  if (suite == "prop1") {
    std::size_t violations = 0, premises = 0;
    Rng rng(seed);
    for (std::size_t i = 0; i < instances; ++i) {
      const DiscreteInstance instance = random_mlrp_instance(rng);
      const PropositionCheck check = verify_proposition(instance);
      premises += check.premises_hold;
      violations += !check.consistent;
    }
    std::printf("prop1 audit: %zu instances, %zu with both premises, %zu violations\n", instances,
                premises, violations);
    return violations == 0 ? 0 : 2;
  }
  if (suite == "fig2") {
    CounterexampleSearchSpace space;
    space.restrict_to_mlrp = restrict_mlrp;
    const DiscreteInstance instance = find_fig2_counterexample(space);
    const ExactRates rates = exact_rates(instance);
    std::fprintf(stderr, "counterexample: uniform t = %s, dr0 = %s, dr1 = %s, or0 = %s, or1 = %s\n",
                 format_double(instance.threshold0).c_str(), format_double(rates.dr0).c_str(),
                 format_double(rates.dr1).c_str(), format_double(rates.or0).c_str(),
                 format_double(rates.or1).c_str());
    write_or_print(out, [&](std::ostream& s) { s << instance_to_json(instance).dump(2) << '\n'; });
    return 0;
  }
  if (suite == "rates") {
    if (instance_path.empty()) throw ValueError("oracle rates needs --instance FILE");
    std::ifstream in(instance_path);
    if (!in) throw IoError("cannot open '" + instance_path + "' for reading");
    nlohmann::json j;
    in >> j;
    const DiscreteInstance instance = instance_from_json(j);
    const ExactRates rates = exact_rates(instance);
    std::printf("dr0 = %s\ndr1 = %s\nor0 = %s\nor1 = %s\n", format_double(rates.dr0).c_str(),
                format_double(rates.dr1).c_str(), format_double(rates.or0).c_str(),
                format_double(rates.or1).c_str());
    return 0;
  }
  throw ValueError("unknown oracle suite '" + suite + "' (expected prop1|fig2|rates)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust outcome test toolkit: discrimination audits, ordering checks, and "
               "simulation studies"};
  app.require_subcommand(1);

  CommonFlags flags;

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "run the three tests per unit on a CSV");
  std::string audit_out, audit_format = "json", plot_out, aggregate_out,
              svar_denominator = "positives";
  add_group_flags(audit_cmd, flags);
  audit_cmd->add_option("--polarity", flags.polarity, "desirable|undesirable");
  audit_cmd->add_option("--mode", flags.mode, "point|significance");
  audit_cmd->add_option("--alpha", flags.alpha, "significance level");
  audit_cmd->add_option("--min-count", flags.min_count,
                        "exclude units with fewer rows per group (0 = off; 1000 is the "
                        "police-stop convention)");
  audit_cmd->add_option("--bins", flags.bins, "monotonicity-check bins");
  audit_cmd->add_option("--min-bin-count", flags.min_bin_count, "minimum rows per bin");
  audit_cmd->add_option("--svar-denominator", svar_denominator,
                        "outcome variance denominator: positives|group");
  audit_cmd->add_option("--out", audit_out, "report path ('-' = stdout)");
  audit_cmd->add_option("--format", audit_format, "json|csv");
  audit_cmd->add_option("--plot-out", plot_out, "scatter-plot CSV path");
  audit_cmd->add_option("--aggregate-out", aggregate_out, "aggregate round-trip CSV path");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "sweep policy pairs over percentile grids");
  std::string sim_preset, sim_config, sim_family, sim_out;
  double sim_sigma2 = 0.0;
  std::uint64_t sim_seed = 0;
  bool sim_per_group = false;
  sim_cmd->add_option("--preset", sim_preset, "named preset (see --list-presets)");
  sim_cmd->add_option("--config", sim_config, "simulation config JSON path");
  sim_cmd->add_option("--input", flags.input, "unit-level CSV with risk scores");
  sim_cmd->add_option("--group0", flags.group0, "source label mapped to group 0");
  sim_cmd->add_option("--group1", flags.group1, "source label mapped to group 1");
  sim_cmd->add_option("--family", sim_family, "threshold|betacdf");
  auto* sigma_opt = sim_cmd->add_option("--sigma2", sim_sigma2, "beta-CDF policy variance");
  sim_cmd->add_option("--polarity", flags.polarity, "desirable|undesirable");
  auto* seed_opt = sim_cmd->add_option("--seed", sim_seed, "preset perturbation seed");
  sim_cmd->add_flag("--per-group-percentiles", sim_per_group,
                    "thresholds from per-group quantiles instead of pooled");
  sim_cmd->add_option("--out", sim_out, "grid CSV path ('-' = stdout)");
  bool list_presets = false;
  sim_cmd->add_flag("--list-presets", list_presets, "print preset names and exit");

  // diagnose
  auto* diag_cmd = app.add_subcommand("diagnose", "monotonicity check of Pr(G=1|R)");
  std::string diag_out, curve_out;
  add_group_flags(diag_cmd, flags);
  diag_cmd->add_option("--bins", flags.bins, "posterior bins");
  diag_cmd->add_option("--min-bin-count", flags.min_bin_count, "minimum rows per bin");
  diag_cmd->add_option("--min-count", flags.min_count, "per-group unit filter (0 = off)");
  diag_cmd->add_option("--out", diag_out, "report JSON path ('-' = stdout)");
  diag_cmd->add_option("--curve-out", curve_out, "plot-data CSV path");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force verification suites");
  std::string oracle_suite, oracle_out, oracle_instance;
  std::size_t oracle_instances = 10000;
  std::uint64_t oracle_seed = 20260810;
  bool restrict_mlrp = false;
  oracle_cmd->add_option("suite", oracle_suite, "prop1|fig2|rates")->required();
  oracle_cmd->add_option("--instances", oracle_instances, "randomized audit size");
  oracle_cmd->add_option("--seed", oracle_seed, "audit seed");
  oracle_cmd->add_option("--out", oracle_out, "fixture JSON path ('-' = stdout)");
  oracle_cmd->add_option("--instance", oracle_instance, "instance fixture to evaluate");
  oracle_cmd->add_flag("--restrict-mlrp", restrict_mlrp,
                       "search only MLRP-ordered pairs (expected NotFound)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (audit_cmd->parsed())
      return run_audit_command(flags, audit_out, audit_format, plot_out, aggregate_out,
                               svar_denominator);
    if (sim_cmd->parsed()) {
      if (list_presets) {
        for (const auto& name : preset_names()) std::printf("%s\n", name.c_str());
        return 0;
      }
      return run_simulate_command(sim_preset, sim_config, flags, sim_family, sim_sigma2,
                                  sigma_opt->count() > 0, sim_seed, seed_opt->count() > 0,
                                  sim_per_group, sim_out);
    }
    if (diag_cmd->parsed()) return run_diagnose_command(flags, diag_out, curve_out);
    if (oracle_cmd->parsed())
      return run_oracle_command(oracle_suite, oracle_instances, oracle_seed, oracle_out,
                                restrict_mlrp, oracle_instance);
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  } catch (const ValueError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  } catch (const EmptyAfterFilter& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  } catch (const NotFound& e) {
    std::fprintf(stderr, "not found: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 0;
}
