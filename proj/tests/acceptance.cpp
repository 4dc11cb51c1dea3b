// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance gate. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "alto/experiment.hpp"
#include "alto/metrics.hpp"
#include "alto/policy.hpp"
#include "alto/results_io.hpp"
#include "alto/sim_env.hpp"
#include "alto/vec_model.hpp"

namespace {

using namespace alto;

// Pinned parameters and tolerances.
constexpr Period kHorizon = 3000;
constexpr std::size_t kBaselineSeeds = 50;
constexpr double kAltoToUcbMax = 0.50;
constexpr Period kTailWindow = 200;
constexpr double kTailDelayTolerance = 0.15;
constexpr double kMinRSquared = 0.9;
constexpr Period kFitFirst = 500;
constexpr Period kRatioEarly = 300;
constexpr double kRatioLimit = 0.5;
constexpr std::size_t kBoundSeeds = 100;
constexpr double kBoundBeta0 = 2.0;
constexpr double kPeriodicSlopeTolerance = 0.25;
constexpr std::size_t kModelDraws = 10000;
constexpr double kModelRelTol = 1e-12;
constexpr double kGreedyFactor = 2.0;
constexpr std::size_t kBernoulliSeeds = 50;

struct Outcome {
  bool passed;
  std::string detail;
};

std::vector<std::uint64_t> seed_range(std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = i + 1;
  return seeds;
}

PolicySpec spec(PolicyKind kind, double beta0, std::string label = {}) {
  PolicySpec s;
  s.kind = kind;
  s.beta0 = beta0;
  s.label = std::move(label);
  return s;
}

ExperimentConfig fleet_config(std::size_t seeds) {
  ExperimentConfig cfg;
  cfg.scenario.kind = ScenarioKind::kSyntheticTable1;
  cfg.scenario.horizon = kHorizon;
  cfg.seeds = seed_range(seeds);
  cfg.plots = {false, false, false, false};
  return cfg;
}

const PolicySummary& summary_of(const ExperimentResult& r, const std::string& label) {
  for (const PolicySummary& s : r.summaries) {
    if (s.label == label) return s;
  }
  throw std::runtime_error("no summary for " + label);
}

std::vector<Observation> run_policy(const ScenarioConfig& scenario, PolicyKind kind,
                                    PolicyOptions options) {
  Environment env(scenario);
  if (kind == PolicyKind::kOracle && options.true_means.empty()) {
    options.true_means =
        oracle_means(estimate_all_epochs(scenario, env.schedule(), kMinMeanSamples));
  }
  const auto policy = make_policy(kind, options);
  return run_episode(env, *policy);
}

Outcome baseline_ordering(const ExperimentResult& r) {
  const double alto = summary_of(r, "alto").final_regret.mean;
  const double ada = summary_of(r, "adaucb").final_regret.mean;
  const double vucb = summary_of(r, "vucb").final_regret.mean;
  const double ucb = summary_of(r, "ucb").final_regret.mean;
  const bool ok = alto < ada && ada < vucb && vucb < ucb && alto <= kAltoToUcbMax * ucb;
  return {ok, fmt::format("R_T alto={:.3f} adaucb={:.3f} vucb={:.3f} ucb={:.3f} alto/ucb={:.3f}",
                          alto, ada, vucb, ucb, alto / ucb)};
}

Outcome delay_convergence(const ExperimentResult& r) {
  std::vector<double> alto_sum, oracle_sum;
  std::size_t alto_n = 0, oracle_n = 0;
  for (const RunResult& run : r.runs) {
    const auto tail = epoch_tail_delay(run, kTailWindow);
    auto& acc = run.policy == "alto" ? alto_sum : oracle_sum;
    if (run.policy != "alto" && run.policy != "oracle") continue;
    (run.policy == "alto" ? alto_n : oracle_n)++;
    acc.resize(tail.size(), 0.0);
    for (std::size_t e = 0; e < tail.size(); ++e) acc[e] += tail[e];
  }
  bool ok = !alto_sum.empty() && alto_sum.size() == oracle_sum.size();
  std::string detail;
  for (std::size_t e = 0; ok && e < alto_sum.size(); ++e) {
    const double a = alto_sum[e] / static_cast<double>(alto_n);
    const double o = oracle_sum[e] / static_cast<double>(oracle_n);
    const double excess = a / o - 1.0;
    ok = ok && excess <= kTailDelayTolerance;
    detail += fmt::format("epoch{} alto={:.5f} oracle={:.5f} excess={:+.2f}% ", e + 1, a, o,
                          100.0 * excess);
  }
  return {ok, detail};
}

Outcome sublinearity() {
  ExperimentConfig cfg;
  cfg.scenario.kind = ScenarioKind::kStationary;
  cfg.scenario.horizon = kHorizon;
  cfg.seeds = seed_range(kBaselineSeeds);
  cfg.policies = {spec(PolicyKind::kAlto, cfg.scenario.beta0)};
  cfg.plots = {false, false, false, false};
  cfg.finalize();
  const ExperimentResult r = run_experiment(cfg);
  if (!r.ok()) return {false, r.failures.front()};
  const auto& mean = r.summaries.front().regret_mean;
  const SublinearityFit fit = sublinearity_fit(mean, kFitFirst, kHorizon);
  const double early = mean[kRatioEarly - 1] / static_cast<double>(kRatioEarly);
  const double late = mean[kHorizon - 1] / static_cast<double>(kHorizon);
  const bool ok = fit.r_squared >= kMinRSquared && late <= kRatioLimit * early;
  return {ok, fmt::format("R2={:.4f} slope={:.4f} R/T@{}={:.5f} R/T@{}={:.5f} ratio={:.3f}",
                          fit.r_squared, fit.slope, kRatioEarly, early, kHorizon, late,
                          late / early)};
}

ScenarioConfig two_arm_fixed_gap() {
  ScenarioConfig s;
  s.kind = ScenarioKind::kStationary;
  s.horizon = kHorizon;
  s.stationary_arms = {1, 2};
  s.fixed_delays = FixedDelayModel{{1.0, 2.0}, 0.5};
  s.task.min_bits = 0.6e6;
  s.task.max_bits = 0.6e6;
  s.beta0 = kBoundBeta0;
  return s;
}

Outcome ucb_pull_bound_check() {
  const ScenarioConfig base = two_arm_fixed_gap();
  const EpochSchedule schedule = build_schedule(base);
  const EpochOracle oracle = estimate_epoch_means(base, schedule, 0, kMinMeanSamples);
  bool ok = true;
  std::string detail;
  for (PolicyKind kind : {PolicyKind::kUcb, PolicyKind::kAlto}) {
    std::vector<std::vector<Observation>> runs;
    for (std::uint64_t seed : seed_range(kBoundSeeds)) {
      ScenarioConfig s = base;
      s.seed = seed;
      PolicyOptions opt;
      opt.beta0 = kBoundBeta0;
      opt.thresholds = threshold_from_quantiles(s);
      runs.push_back(run_policy(s, kind, opt));
    }
    for (const ArmBoundCheck& c : check_ucb_pull_bounds(base, runs, oracle, kBoundSeeds)) {
      ok = ok && c.check.passed && !c.check.vacuous;
      detail += fmt::format("{} arm{} delta={:.4f} mean={:.2f} ci_hi={:.2f} bound={:.2f}; ",
                            policy_name(kind), c.arm, c.delta, c.check.pulls.mean,
                            c.check.pulls.ci95_upper(), c.check.bound);
    }
  }
  return {ok, detail};
}

Outcome periodic_bound() {
  ScenarioConfig s;
  s.kind = ScenarioKind::kPeriodicTwoSev;
  s.horizon = kHorizon;
  s.beta0 = kBoundBeta0;
  std::vector<std::vector<Observation>> runs;
  for (std::uint64_t seed : seed_range(kBoundSeeds)) {
    ScenarioConfig c = s;
    c.seed = seed;
    PolicyOptions opt;
    opt.beta0 = kBoundBeta0;
    opt.thresholds = threshold_from_quantiles(c);
    runs.push_back(run_policy(c, PolicyKind::kAlto, opt));
  }
  const PeriodicBoundCheck c = check_periodic_bound(s, runs, kBoundBeta0, kPeriodicSlopeTolerance);
  return {c.passed,
          fmt::format("coef={:.4f} slope={:.4f} ratio={:.4f} C={:.4f} R_T={:.4f} bound={:.4f} "
                      "envelope={}",
                      c.coefficient, c.fit.slope, c.slope_ratio, c.fitted_constant,
                      c.mean_final_regret, c.leading_term + c.fitted_constant,
                      c.pull_envelope_holds)};
}

bool same_decisions(const std::vector<Observation>& a, const std::vector<Observation>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].chosen != b[i].chosen || a[i].sum_delay != b[i].sum_delay) return false;
  }
  return true;
}

Outcome exact_reductions() {
  int checked = 0, matched = 0;
  for (std::uint64_t seed : seed_range(20)) {
    ScenarioConfig s;
    s.horizon = kHorizon;
    s.seed = seed;
    PolicyOptions base;
    base.beta0 = 0.5;
    base.thresholds = threshold_from_quantiles(s);

    // (a) every input at or below a collapsed threshold.
    PolicyOptions collapsed = base;
    collapsed.thresholds = {s.task.max_bits, s.task.max_bits};
    matched += same_decisions(run_policy(s, PolicyKind::kAlto, collapsed),
                              run_policy(s, PolicyKind::kVucb, collapsed));
    // (b) occurrence times pinned at zero.
    PolicyOptions zero = base;
    zero.zero_occurrence_clock = true;
    matched += same_decisions(run_policy(s, PolicyKind::kAlto, zero),
                              run_policy(s, PolicyKind::kAdaUcb, base));
    matched += same_decisions(run_policy(s, PolicyKind::kVucb, zero),
                              run_policy(s, PolicyKind::kUcb, base));
    checked += 3;
  }
  return {matched == checked, fmt::format("{}/{} decision streams identical", matched, checked)};
}

Outcome model_identity() {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> d(10.0, 200.0), f(0.2 * 3e9, 0.5 * 6.5e9),
      x(1e3, 5e6), ratio(0.0, 2.0), p(0.01, 1.0), w(1e6, 40e6), intensity(100.0, 5000.0),
      step(1.0, 50.0);
  std::size_t identity_fail = 0, monotone_fail = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < kModelDraws; ++i) {
    vec::RadioParams radio;
    radio.tx_power_watts = p(rng);
    radio.bandwidth_hz = w(rng);
    vec::Task task{x(rng), ratio(rng), intensity(rng)};
    const double dist = d(rng);
    vec::ComputeState cpu{6.5e9, f(rng)};
    const auto link = vec::reciprocal_link(dist, radio);
    const double ru = vec::uplink_rate(radio, link.channel_gain_up);
    const double rd = vec::downlink_rate(radio, link.channel_gain_down);
    const double total = vec::sum_delay(task, ru, rd, cpu);
    const double per_bit = vec::bit_offload_delay(task, ru, rd, cpu);
    const double rel = std::abs(total - task.input_bits * per_bit) / total;
    worst = std::max(worst, rel);
    if (rel > kModelRelTol) ++identity_fail;

    // Farther, slower, or larger never helps.
    const auto far = vec::reciprocal_link(dist + step(rng), radio);
    const double far_total = vec::sum_delay(task, vec::uplink_rate(radio, far.channel_gain_up),
                                            vec::downlink_rate(radio, far.channel_gain_down), cpu);
    vec::ComputeState slow = cpu;
    slow.alloc_cpu_hz *= 0.5;
    vec::Task big = task;
    big.input_bits *= 1.5;
    if (!(far_total > total) || !(vec::sum_delay(task, ru, rd, slow) > total) ||
        !(vec::sum_delay(big, ru, rd, cpu) > total) || !(ru > 0.0)) {
      ++monotone_fail;
    }
  }
  return {identity_fail == 0 && monotone_fail == 0,
          fmt::format("{} draws, worst relative gap {:.3g}, identity failures {}, "
                      "monotonicity failures {}",
                      kModelDraws, worst, identity_fail, monotone_fail)};
}

Outcome beta_sweep() {
  ExperimentConfig cfg = fleet_config(kBaselineSeeds);
  for (double b : {0.0, 0.5, 1.0, 2.0}) {
    cfg.policies.push_back(spec(PolicyKind::kAlto, b, fmt::format("alto-b{}", b)));
  }
  cfg.finalize();
  const ExperimentResult r = run_experiment(cfg);
  if (!r.ok()) return {false, r.failures.front()};
  const auto& s0 = summary_of(r, "alto-b0").final_regret;
  const auto& s05 = summary_of(r, "alto-b0.5").final_regret;
  const auto& s1 = summary_of(r, "alto-b1").final_regret;
  const auto& s2 = summary_of(r, "alto-b2").final_regret;
  const auto pooled = [](const SampleSummary& a, const SampleSummary& b) {
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  };
  const bool greedy = s0.mean >= kGreedyFactor * s05.mean;
  const bool step1 = s1.mean >= s05.mean - pooled(s05, s1);
  const bool step2 = s2.mean >= s1.mean - pooled(s1, s2);
  return {greedy && step1 && step2,
          fmt::format("R_T b0={:.3f} b0.5={:.3f} b1={:.3f} b2={:.3f} (se {:.3f} {:.3f} {:.3f})",
                      s0.mean, s05.mean, s1.mean, s2.mean, s05.std_error, s1.std_error,
                      s2.std_error)};
}

std::string results_bytes(unsigned jobs, const std::filesystem::path& dir) {
  ExperimentConfig cfg = fleet_config(4);
  cfg.policies = {spec(PolicyKind::kAlto, 0.5), spec(PolicyKind::kRandom, 0.5),
                  spec(PolicyKind::kUcb, 0.5)};
  cfg.output_dir = dir;
  cfg.jobs = jobs;
  cfg.finalize();
  emit_outputs(run_experiment(cfg));
  std::ifstream in(dir / "results.csv", std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / "alto_acceptance_det";
  std::filesystem::remove_all(root);
  const std::string a = results_bytes(1, root / "a");
  const std::string b = results_bytes(4, root / "b");
  std::filesystem::remove_all(root);
  return {!a.empty() && a == b, fmt::format("{} bytes, identical={}", a.size(), a == b)};
}

Outcome bernoulli() {
  ExperimentConfig cfg;
  cfg.scenario.kind = ScenarioKind::kBernoulliArrivals;
  cfg.scenario.horizon = kHorizon;
  cfg.seeds = seed_range(kBernoulliSeeds);
  cfg.policies = {spec(PolicyKind::kAlto, 0.5), spec(PolicyKind::kRandom, 0.5)};
  cfg.plots = {false, false, false, false};
  cfg.oracle_samples = kMinMeanSamples;
  cfg.finalize();
  const ExperimentResult r = run_experiment(cfg);
  if (!r.ok()) return {false, r.failures.front()};
  const double alto = summary_of(r, "alto").final_avg_delay.mean;
  const double random = summary_of(r, "random").final_avg_delay.mean;
  return {alto <= random, fmt::format("mean delay alto={:.5f} random={:.5f}", alto, random)};
}

}  // namespace

int main() {
  ExperimentConfig baselines = fleet_config(kBaselineSeeds);
  for (const char* name : {"alto", "ucb", "vucb", "adaucb", "random", "oracle"}) {
    baselines.policies.push_back(spec(policy_kind_from_name(name), baselines.scenario.beta0));
  }
  baselines.finalize();

  std::optional<ExperimentResult> fleet;
  const auto fleet_result = [&]() -> const ExperimentResult& {
    if (!fleet) fleet = run_experiment(baselines);
    return *fleet;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 baseline ordering", [&] { return baseline_ordering(fleet_result()); }},
      {"2 delay convergence", [&] { return delay_convergence(fleet_result()); }},
      {"3 sublinear regret", sublinearity},
      {"4 suboptimal pull bound", ucb_pull_bound_check},
      {"5 periodic-input bound", periodic_bound},
      {"6 exact reductions", exact_reductions},
      {"7 delay model identity", model_identity},
      {"8 exploration weight sweep", beta_sweep},
      {"9 determinism", determinism},
      {"bernoulli alto vs random", bernoulli},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::cout << fmt::format("{} [{}] {}\n", o.passed ? "PASS" : "FAIL", name, o.detail)
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures,
                           criteria.size());
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
