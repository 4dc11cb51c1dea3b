// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Batch experiments: (policy x seed) cells over one scenario, aggregated into
// CSV tables and SVG curves.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alto/metrics.hpp"
#include "alto/policy.hpp"
#include "alto/sim_env.hpp"

namespace alto {

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "ALTO_OUTPUT_DIR";

struct PolicySpec {
  PolicyKind kind = PolicyKind::kAlto;
  double beta0 = 0.5;
  // Per-policy threshold quantiles; the scenario's apply when unset.
  std::optional<double> rho_lower;
  std::optional<double> rho_upper;
  // Unique name used in result files; derived from the fields when empty.
  std::string label;
};

struct PlotToggles {
  bool regret_vs_t = true;
  bool avg_delay_vs_t = true;
  bool beta_sweep = false;
  bool threshold_sweep = false;

  bool any() const { return regret_vs_t || avg_delay_vs_t || beta_sweep || threshold_sweep; }
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<PolicySpec> policies;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "results";
  // Emit a results row every `stride` periods (and always the last one).
  Period stride = 1;
  PlotToggles plots;
  std::size_t oracle_samples = 100000;
  // Worker threads; 0 picks the hardware concurrency.
  unsigned jobs = 0;

  // Fills missing labels and throws ConfigError on any invariant violation.
  void finalize();
};

// Parses the sectioned YAML config (scenario / policies / seeds / output).
// Unknown keys and invalid values raise ConfigError with the line number.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);

// "N" (count from the configured base) or "base:count".
std::vector<std::uint64_t> parse_seed_spec(std::string_view spec, std::uint64_t default_base);

struct ResultRow {
  std::string scenario;
  std::string policy;
  std::uint64_t seed = 0;
  Period t = 0;
  double cum_regret = 0.0;
  double cum_avg_delay = 0.0;
  ArmId chosen_arm = 0;
  double x_t = 0.0;

  bool operator==(const ResultRow&) const = default;
};

struct RunPoint {
  Period t = 0;
  int epoch = 0;
  ArmId chosen = 0;
  double x = 0.0;
  double sum_delay = 0.0;
  double cum_regret = 0.0;
  double cum_avg_delay = 0.0;
};

struct RunResult {
  std::string policy;
  std::size_t policy_index = 0;
  std::uint64_t seed = 0;
  std::vector<RunPoint> points;
  std::map<ArmId, std::int64_t> pulls;
  std::vector<Epoch> epochs;
  std::string failure;  // empty on success

  bool ok() const { return failure.empty(); }
  double final_regret() const { return points.empty() ? 0.0 : points.back().cum_regret; }
};

struct EpochDelaySummary {
  int epoch = 0;
  Period start = 0;
  Period end = 0;
  SampleSummary delay;
};

struct PolicySummary {
  std::string label;
  PolicySpec spec;
  SampleSummary final_regret;
  SampleSummary final_avg_delay;
  std::vector<EpochDelaySummary> epoch_delays;
  std::map<ArmId, SampleSummary> pulls;
  // Full-resolution curves over t = 1..T.
  std::vector<double> regret_mean, regret_std, delay_mean, delay_std;
};

struct ExperimentResult {
  ExperimentConfig config;
  // Ordered by policy label, then seed.
  std::vector<RunResult> runs;
  std::vector<PolicySummary> summaries;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  // Rows at the configured stride, sorted by policy, seed, t.
  std::vector<ResultRow> rows() const;
};

// Executes every (policy, seed) cell on a worker pool. Output is
// independent of the number of workers.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Mean per-period delay of each run over the last `window` periods of every
// epoch, keyed by epoch index.
std::vector<double> epoch_tail_delay(const RunResult& run, Period window);

// Writes results.csv, summary.csv, epochs.csv, pulls.csv and the enabled
// plots into config.output_dir. Returns the files written.
std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result);

// Re-aggregates an existing results.csv into summary.csv (and curves when
// plots are requested) under out_dir.
std::vector<std::filesystem::path> report_from_results(const std::filesystem::path& results_csv,
                                                       const std::filesystem::path& out_dir,
                                                       bool with_plots);

}  // namespace alto
