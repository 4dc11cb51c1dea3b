// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Regret, delay, and empirical regret-bound checks over observation streams.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "alto/policy.hpp"
#include "alto/sim_env.hpp"

namespace alto {

inline constexpr std::size_t kMinMeanSamples = 10000;
inline constexpr std::uint64_t kOracleSeed = 0x0AC1E;

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation
  double std_error = 0.0;
  // Half width of the two-sided 95% Student-t interval.
  double ci95_half_width = 0.0;

  double ci95_upper() const { return mean + ci95_half_width; }
};

SampleSummary summarize(std::span<const double> values);

struct ArmMeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double sample_max = 0.0;
};

// Monte-Carlo estimate of every listed arm's mean per-bit delay under the
// scenario's per-period law. Distances are drawn from the long-run law of the
// clamped random walk. Throws PrecisionError below kMinMeanSamples.
std::map<ArmId, ArmMeanEstimate> estimate_arm_means(const ScenarioConfig& config,
                                                    const EpochSchedule& schedule,
                                                    std::span<const ArmId> arms,
                                                    std::size_t sample_count,
                                                    std::uint64_t seed = kOracleSeed);

struct EpochOracle {
  int epoch = 0;
  Period start = 1;
  Period end = 1;
  std::map<ArmId, double> means;
  std::map<ArmId, double> std_errors;
  double mu_star = 0.0;
  ArmId best_arm = 0;
  // (mean - mu_star) / delay_sup for each member.
  std::map<ArmId, double> gaps;
  // Largest sampled per-bit delay among the epoch's members.
  double delay_sup = 0.0;
};

EpochOracle estimate_epoch_means(const ScenarioConfig& config, const EpochSchedule& schedule,
                                 int epoch, std::size_t sample_count,
                                 std::uint64_t seed = kOracleSeed);

// One oracle per epoch; arm means are estimated once and shared.
std::vector<EpochOracle> estimate_all_epochs(const ScenarioConfig& config,
                                             const EpochSchedule& schedule,
                                             std::size_t sample_count,
                                             std::uint64_t seed = kOracleSeed);

// Every arm's true mean across all epochs, the form the oracle policy wants.
std::map<ArmId, double> oracle_means(std::span<const EpochOracle> oracles);

struct RegretPoint {
  Period t = 0;
  double instantaneous = 0.0;
  double cumulative = 0.0;
  double cumulative_avg_delay = 0.0;
};

struct RegretTrace {
  std::vector<RegretPoint> points;

  double final_regret() const { return points.empty() ? 0.0 : points.back().cumulative; }
  std::vector<double> cumulative() const;
};

// R_t = sum over periods of x_t (u(t, a_t) - mu*_b(t)). Throws InputError when
// an observation's epoch has no oracle.
RegretTrace regret_trace(std::span<const Observation> observations,
                         std::span<const EpochOracle> oracles);

// Pointwise mean of the cumulative regret over runs of equal length.
std::vector<double> mean_cumulative_regret(std::span<const RegretTrace> traces);

// Mean sum delay over observations with t in [first, last].
double average_delay(std::span<const Observation> observations, Period first, Period last);

struct SublinearityFit {
  double intercept = 0.0;
  double slope = 0.0;  // coefficient of ln t
  double r_squared = 0.0;
  double ratio_start = 0.0;  // R_t / t at the window start
  double ratio_end = 0.0;    // R_t / t at the window end
  bool sublinear = false;
};

// Least-squares fit of R_t = a + b ln t over t in [first, last]. `cumulative`
// holds R_t at index t - 1. The trace counts as sublinear when R_t / t at the
// end of the window is at most `ratio_limit` times its value at the start.
SublinearityFit sublinearity_fit(std::span<const double> cumulative, Period first, Period last,
                                 double ratio_limit = 0.5);

// 8 ln T / delta^2 + 1 + pi^2 / 3; infinite for delta <= 0.
double ucb_pull_bound(double delta, double horizon);

struct BoundCheck {
  double bound = 0.0;
  SampleSummary pulls;
  double margin = 0.0;  // bound - CI upper edge
  bool passed = false;
  bool vacuous = false;
  std::string warning;
};

// Compares pull counts of one suboptimal arm (one entry per run) with the
// bound. Throws InputError when fewer than `min_runs` runs are supplied.
BoundCheck check_ucb_pull_bound(std::span<const double> pull_counts, double delta,
                                Period horizon, std::size_t min_runs = 100);

struct ArmBoundCheck {
  ArmId arm = 0;
  double delta = 0.0;
  BoundCheck check;
};

// Runs the bound check for every suboptimal arm of a stationary run set.
// delta uses the largest true per-bit delay seen anywhere in the run set.
std::vector<ArmBoundCheck> check_ucb_pull_bounds(const ScenarioConfig& config,
                                                 std::span<const std::vector<Observation>> runs,
                                                 const EpochOracle& oracle,
                                                 std::size_t min_runs = 100);

// 2 mu2 eps0 / Delta with Delta = (mu2 - mu1) / mu2; infinite when mu1 == mu2.
double periodic_bound_coefficient(const PeriodicParams& params);

struct PeriodicBoundCheck {
  double coefficient = 0.0;
  double leading_term = 0.0;  // coefficient * ln T
  double mean_final_regret = 0.0;
  // Smallest C with mean R_t <= coefficient ln t + C over the second epoch.
  double fitted_constant = 0.0;
  SublinearityFit fit;
  double slope_ratio = 0.0;  // fit.slope / coefficient
  double mean_suboptimal_pulls = 0.0;
  // (mu2 - mu1) * mean pulls of vehicle 2 in the second epoch.
  double pull_cost = 0.0;
  // k2(t) <= beta0 ln t / Delta^2 + 1 at every t of every run.
  bool pull_envelope_holds = false;
  bool passed = false;
};

// Throws InputError unless the config is the periodic-two-sev scenario.
PeriodicBoundCheck check_periodic_bound(const ScenarioConfig& config,
                                   std::span<const std::vector<Observation>> runs,
                                   double beta0, double slope_tolerance = 0.25);

}  // namespace alto
