// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: run experiments, re-aggregate results, list scenarios.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "alto/errors.hpp"
#include "alto/experiment.hpp"

namespace {

struct RunArgs {
  std::string config;
  std::string out;
  std::string seeds;
  std::vector<std::string> policies;
  long long horizon = 0;
  unsigned jobs = 0;
  bool jobs_set = false;
};

int do_run(const RunArgs& args) {
  alto::ExperimentConfig cfg = alto::parse_config(args.config);
  if (!args.out.empty()) cfg.output_dir = args.out;
  if (!args.seeds.empty()) {
    const std::uint64_t base = cfg.seeds.empty() ? 1 : cfg.seeds.front();
    cfg.seeds = alto::parse_seed_spec(args.seeds, base);
  }
  if (!args.policies.empty()) {
    std::vector<alto::PolicySpec> specs;
    for (const std::string& name : args.policies) {
      alto::PolicySpec spec;
      spec.kind = alto::policy_kind_from_name(name);
      spec.beta0 = cfg.scenario.beta0;
      specs.push_back(spec);
    }
    cfg.policies = std::move(specs);
  }
  if (args.horizon > 0) cfg.scenario.horizon = args.horizon;
  if (args.jobs_set) cfg.jobs = args.jobs;
  cfg.finalize();

  const alto::ExperimentResult result = alto::run_experiment(cfg);
  for (const auto& path : alto::emit_outputs(result)) std::cout << path.string() << '\n';
  for (const alto::PolicySummary& s : result.summaries) {
    std::cout << fmt::format("{:<28} regret {:>12.4f} +- {:<10.4f} avg delay {:.6f}\n", s.label,
                             s.final_regret.mean, s.final_regret.stddev,
                             s.final_avg_delay.mean);
  }
  for (const std::string& f : result.failures) std::cerr << "run failed: " << f << '\n';
  return result.ok() ? EXIT_SUCCESS : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge offloading bandit simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Run an experiment from a YAML config");
  run->add_option("-c,--config", run_args.config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", run_args.out, "Output directory (overrides the config)");
  run->add_option("-s,--seeds", run_args.seeds, "Seed count N or base:count");
  run->add_option("-p,--policy", run_args.policies, "Policy name; repeatable, replaces the config list");
  run->add_option("--horizon", run_args.horizon, "Number of periods")->check(CLI::PositiveNumber);
  run->add_option("-j,--jobs", run_args.jobs, "Worker threads (0 = all cores)")
      ->each([&](const std::string&) { run_args.jobs_set = true; });

  std::string results_path, report_out;
  bool report_plots = true;
  CLI::App* report = app.add_subcommand("report", "Summarize an existing results.csv");
  report->add_option("-r,--results", results_path, "results.csv")->required()->check(CLI::ExistingFile);
  report->add_option("-o,--out", report_out, "Output directory")->required();
  report->add_flag("!--no-plots", report_plots, "Skip SVG curves");

  CLI::App* scenarios = app.add_subcommand("scenarios", "List built-in scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return do_run(run_args);
    if (*report) {
      for (const auto& p : alto::report_from_results(results_path, report_out, report_plots)) {
        std::cout << p.string() << '\n';
      }
      return EXIT_SUCCESS;
    }
    if (*scenarios) {
      for (alto::ScenarioKind kind : alto::all_scenario_kinds()) {
        std::cout << fmt::format("{:<20} {}\n", alto::scenario_name(kind),
                                 alto::scenario_summary(kind));
      }
      return EXIT_SUCCESS;
    }
  } catch (const alto::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return EXIT_SUCCESS;
}
