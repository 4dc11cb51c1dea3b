// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "alto/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "alto/errors.hpp"
#include "alto/results_io.hpp"
#include "alto/svg_plot.hpp"

namespace alto {
namespace {

constexpr std::uint64_t kPolicySeedSalt = 0x9E3779B97F4A7C15ULL;

NormalizationThresholds thresholds_for(const ScenarioConfig& scenario, const PolicySpec& spec) {
  ScenarioConfig copy = scenario;
  if (spec.rho_lower) copy.rho_lower = *spec.rho_lower;
  if (spec.rho_upper) copy.rho_upper = *spec.rho_upper;
  if (spec.rho_lower || spec.rho_upper) copy.thresholds.reset();
  return threshold_from_quantiles(copy);
}

RunResult run_cell(const ExperimentConfig& config, std::size_t policy_index, std::uint64_t seed,
                   const std::vector<EpochOracle>* shared_oracles) {
  const PolicySpec& spec = config.policies[policy_index];
  RunResult run;
  run.policy = spec.label;
  run.policy_index = policy_index;
  run.seed = seed;
  try {
    ScenarioConfig scenario = config.scenario;
    scenario.seed = seed;
    Environment env(scenario);
    std::vector<EpochOracle> own;
    if (shared_oracles == nullptr) {
      own = estimate_all_epochs(scenario, env.schedule(), config.oracle_samples);
    }
    const std::vector<EpochOracle>& oracles = shared_oracles ? *shared_oracles : own;

    PolicyOptions options;
    options.beta0 = spec.beta0;
    options.thresholds = thresholds_for(scenario, spec);
    options.seed = seed ^ kPolicySeedSalt;
    options.true_means = oracle_means(oracles);
    const auto policy = make_policy(spec.kind, options);

    const std::vector<Observation> observations = run_episode(env, *policy);
    const RegretTrace trace = regret_trace(observations, oracles);
    run.points.reserve(observations.size());
    for (std::size_t i = 0; i < observations.size(); ++i) {
      const Observation& o = observations[i];
      run.points.push_back({o.t, o.epoch, o.chosen, o.input_bits, o.sum_delay,
                            trace.points[i].cumulative, trace.points[i].cumulative_avg_delay});
      ++run.pulls[o.chosen];
    }
    run.epochs = env.schedule().epochs();
  } catch (const std::exception& e) {
    run.points.clear();
    run.pulls.clear();
    run.failure = e.what();
  }
  return run;
}

std::pair<std::vector<double>, std::vector<double>> curve_stats(
    const std::vector<const RunResult*>& runs, double RunPoint::*field) {
  if (runs.empty()) return {};
  const std::size_t n = runs.front()->points.size();
  std::vector<double> mean(n, 0.0), stddev(n, 0.0);
  std::vector<double> column(runs.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < runs.size(); ++r) column[r] = runs[r]->points[i].*field;
    const SampleSummary s = summarize(column);
    mean[i] = s.mean;
    stddev[i] = s.stddev;
  }
  return {mean, stddev};
}

PolicySummary summarize_policy(const ExperimentConfig& config, const PolicySpec& spec,
                               const std::vector<const RunResult*>& runs) {
  PolicySummary summary;
  summary.label = spec.label;
  summary.spec = spec;
  if (runs.empty()) return summary;

  std::vector<double> regrets, delays;
  for (const RunResult* r : runs) {
    regrets.push_back(r->final_regret());
    delays.push_back(r->points.back().cum_avg_delay);
  }
  summary.final_regret = summarize(regrets);
  summary.final_avg_delay = summarize(delays);

  // Per-epoch tables only make sense when every seed shares the schedule.
  if (config.scenario.kind != ScenarioKind::kBernoulliArrivals) {
    for (const Epoch& epoch : runs.front()->epochs) {
      std::vector<double> per_run;
      for (const RunResult* r : runs) {
        double sum = 0.0;
        for (Period t = epoch.start; t <= epoch.end; ++t) {
          sum += r->points[static_cast<std::size_t>(t - 1)].sum_delay;
        }
        per_run.push_back(sum / static_cast<double>(epoch.end - epoch.start + 1));
      }
      summary.epoch_delays.push_back({epoch.index, epoch.start, epoch.end, summarize(per_run)});
    }
  }

  std::set<ArmId> arms;
  for (const RunResult* r : runs) {
    for (const auto& [arm, count] : r->pulls) arms.insert(arm);
  }
  for (ArmId arm : arms) {
    std::vector<double> counts;
    for (const RunResult* r : runs) {
      const auto it = r->pulls.find(arm);
      counts.push_back(it == r->pulls.end() ? 0.0 : static_cast<double>(it->second));
    }
    summary.pulls[arm] = summarize(counts);
  }

  std::tie(summary.regret_mean, summary.regret_std) = curve_stats(runs, &RunPoint::cum_regret);
  std::tie(summary.delay_mean, summary.delay_std) = curve_stats(runs, &RunPoint::cum_avg_delay);
  return summary;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<double> iota_x(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
  return x;
}

std::string summary_csv(const std::vector<std::tuple<std::string, SampleSummary, SampleSummary, Period>>& rows) {
  std::string out =
      "policy,runs,t_final,mean_cum_regret,std_cum_regret,mean_cum_avg_delay,std_cum_avg_delay\n";
  for (const auto& [label, regret, delay, t_final] : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", label, regret.count, t_final,
                       format_double(regret.mean), format_double(regret.stddev),
                       format_double(delay.mean), format_double(delay.stddev));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& input) {
  ExperimentResult result;
  result.config = input;
  ExperimentConfig& config = result.config;
  config.finalize();

  // Every seed shares the schedule except for random arrivals, so one oracle
  // serves the whole sweep.
  std::optional<std::vector<EpochOracle>> shared;
  if (config.scenario.kind != ScenarioKind::kBernoulliArrivals) {
    try {
      const EpochSchedule schedule = build_schedule(config.scenario);
      shared = estimate_all_epochs(config.scenario, schedule, config.oracle_samples);
    } catch (const std::exception&) {
      // Let every cell hit the same error so it lands in the failure list.
      shared.reset();
    }
  }

  const std::size_t cells = config.policies.size() * config.seeds.size();
  result.runs.resize(cells);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      const std::size_t p = i / config.seeds.size();
      const std::size_t s = i % config.seeds.size();
      result.runs[i] = run_cell(config, p, config.seeds[s], shared ? &*shared : nullptr);
    }
  };
  unsigned jobs = config.jobs != 0 ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, cells));
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }

  std::sort(result.runs.begin(), result.runs.end(), [](const RunResult& a, const RunResult& b) {
    return std::tie(a.policy, a.seed) < std::tie(b.policy, b.seed);
  });
  for (const RunResult& run : result.runs) {
    if (!run.ok()) {
      result.failures.push_back(fmt::format("{} seed={}: {}", run.policy, run.seed, run.failure));
    }
  }

  std::vector<std::size_t> order(config.policies.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return config.policies[a].label < config.policies[b].label;
  });
  for (std::size_t p : order) {
    std::vector<const RunResult*> runs;
    for (const RunResult& run : result.runs) {
      if (run.policy_index == p && run.ok()) runs.push_back(&run);
    }
    result.summaries.push_back(summarize_policy(config, config.policies[p], runs));
  }
  return result;
}

std::vector<ResultRow> ExperimentResult::rows() const {
  std::vector<ResultRow> out;
  const std::string scenario(scenario_name(config.scenario.kind));
  for (const RunResult& run : runs) {
    if (!run.ok()) continue;
    const Period last = run.points.empty() ? 0 : run.points.back().t;
    for (const RunPoint& p : run.points) {
      if ((p.t - 1) % config.stride != 0 && p.t != last) continue;
      out.push_back({scenario, run.policy, run.seed, p.t, p.cum_regret, p.cum_avg_delay,
                     p.chosen, p.x});
    }
  }
  return out;
}

std::vector<double> epoch_tail_delay(const RunResult& run, Period window) {
  std::vector<double> out;
  for (const Epoch& epoch : run.epochs) {
    const Period first = std::max(epoch.start, epoch.end - window + 1);
    double sum = 0.0;
    for (Period t = first; t <= epoch.end; ++t) {
      sum += run.points[static_cast<std::size_t>(t - 1)].sum_delay;
    }
    out.push_back(sum / static_cast<double>(epoch.end - first + 1));
  }
  return out;
}

std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result) {
  const ExperimentConfig& config = result.config;
  const std::filesystem::path& dir = config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    written.push_back(dir / name);
  };

  {
    std::ostringstream out;
    write_results_csv(out, result.rows());
    emit("results.csv", out.str());
  }

  std::vector<std::tuple<std::string, SampleSummary, SampleSummary, Period>> summary_rows;
  std::string epochs = "policy,epoch,start,end,runs,mean_avg_delay,std_avg_delay\n";
  std::string pulls = "policy,arm,runs,mean_pulls,std_pulls\n";
  for (const PolicySummary& s : result.summaries) {
    summary_rows.emplace_back(s.label, s.final_regret, s.final_avg_delay, config.scenario.horizon);
    for (const EpochDelaySummary& e : s.epoch_delays) {
      epochs += fmt::format("{},{},{},{},{},{},{}\n", s.label, e.epoch + 1, e.start, e.end,
                            e.delay.count, format_double(e.delay.mean),
                            format_double(e.delay.stddev));
    }
    for (const auto& [arm, p] : s.pulls) {
      pulls += fmt::format("{},{},{},{},{}\n", s.label, arm, p.count, format_double(p.mean),
                           format_double(p.stddev));
    }
  }
  emit("summary.csv", summary_csv(summary_rows));
  emit("epochs.csv", epochs);
  emit("pulls.csv", pulls);

  const auto series = [](const std::string& label, const std::vector<double>& mean,
                         const std::vector<double>& stddev) {
    return PlotSeries{label, iota_x(mean.size()), mean, stddev};
  };
  if (config.plots.regret_vs_t) {
    PlotSpec plot{"Cumulative learning regret", "period t", "regret (s)", {}};
    for (const PolicySummary& s : result.summaries) {
      plot.series.push_back(series(s.label, s.regret_mean, s.regret_std));
    }
    emit("regret_vs_t.svg", render_svg(plot));
  }
  if (config.plots.avg_delay_vs_t) {
    PlotSpec plot{"Average offloading delay", "period t", "average delay (s)", {}};
    for (const PolicySummary& s : result.summaries) {
      plot.series.push_back(series(s.label, s.delay_mean, s.delay_std));
    }
    emit("avg_delay_vs_t.svg", render_svg(plot));
  }
  if (config.plots.beta_sweep) {
    PlotSpec plot{"ALTO regret by exploration weight", "period t", "regret (s)", {}};
    for (const PolicySummary& s : result.summaries) {
      if (s.spec.kind != PolicyKind::kAlto) continue;
      plot.series.push_back(series(fmt::format("beta0={:g}", s.spec.beta0), s.regret_mean, s.regret_std));
    }
    emit("beta_sweep.svg", render_svg(plot));
  }
  if (config.plots.threshold_sweep) {
    PlotSpec plot{"ALTO regret by normalization thresholds", "period t", "regret (s)", {}};
    for (const PolicySummary& s : result.summaries) {
      if (s.spec.kind != PolicyKind::kAlto) continue;
      const double lo = s.spec.rho_lower.value_or(config.scenario.rho_lower);
      const double hi = s.spec.rho_upper.value_or(config.scenario.rho_upper);
      plot.series.push_back(series(fmt::format("rho-={:g} rho+={:g}", lo, hi), s.regret_mean, s.regret_std));
    }
    emit("threshold_sweep.svg", render_svg(plot));
  }
  return written;
}

std::vector<std::filesystem::path> report_from_results(const std::filesystem::path& results_csv,
                                                       const std::filesystem::path& out_dir,
                                                       bool with_plots) {
  std::ifstream in(results_csv, std::ios::binary);
  if (!in) throw InputError("cannot open " + results_csv.string());
  const std::vector<ResultRow> rows = read_results_csv(in);

  // policy -> seed -> rows in file order
  std::map<std::string, std::map<std::uint64_t, std::vector<const ResultRow*>>> grouped;
  for (const ResultRow& row : rows) grouped[row.policy][row.seed].push_back(&row);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string());

  std::vector<std::tuple<std::string, SampleSummary, SampleSummary, Period>> summary_rows;
  PlotSpec regret{"Cumulative learning regret", "period t", "regret (s)", {}};
  PlotSpec delay{"Average offloading delay", "period t", "average delay (s)", {}};
  for (const auto& [policy, runs] : grouped) {
    std::vector<double> finals, delays;
    Period t_final = 0;
    for (const auto& [seed, run] : runs) {
      finals.push_back(run.back()->cum_regret);
      delays.push_back(run.back()->cum_avg_delay);
      t_final = std::max(t_final, run.back()->t);
    }
    summary_rows.emplace_back(policy, summarize(finals), summarize(delays), t_final);

    if (!with_plots) continue;
    const auto& first = runs.begin()->second;
    PlotSeries r{policy, {}, {}, {}}, d{policy, {}, {}, {}};
    for (std::size_t i = 0; i < first.size(); ++i) {
      std::vector<double> rc, dc;
      for (const auto& [seed, run] : runs) {
        if (i < run.size()) {
          rc.push_back(run[i]->cum_regret);
          dc.push_back(run[i]->cum_avg_delay);
        }
      }
      const SampleSummary rs = summarize(rc), ds = summarize(dc);
      const double t = static_cast<double>(first[i]->t);
      r.x.push_back(t);
      r.mean.push_back(rs.mean);
      r.stddev.push_back(rs.stddev);
      d.x.push_back(t);
      d.mean.push_back(ds.mean);
      d.stddev.push_back(ds.stddev);
    }
    regret.series.push_back(std::move(r));
    delay.series.push_back(std::move(d));
  }

  std::vector<std::filesystem::path> written;
  write_file(out_dir / "summary.csv", summary_csv(summary_rows));
  written.push_back(out_dir / "summary.csv");
  if (with_plots) {
    write_file(out_dir / "regret_vs_t.svg", render_svg(regret));
    write_file(out_dir / "avg_delay_vs_t.svg", render_svg(delay));
    written.push_back(out_dir / "regret_vs_t.svg");
    written.push_back(out_dir / "avg_delay_vs_t.svg");
  }
  return written;
}

}  // namespace alto
