// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Discrete-time offloading environment.
//
// Each period the environment refreshes the candidate set from an epoch
// schedule, moves every alive service vehicle, redraws CPU allocations,
// draws a task, and evaluates the true per-bit delay of every candidate.
// A policy then sees the candidate ids and the task size, picks one vehicle,
// and is told only that vehicle's sum delay.
//
// All randomness comes from one seeded engine and is consumed in a fixed
// order that does not depend on the policy's choices, so every policy run
// with the same seed faces the same trace.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "alto/policy.hpp"
#include "alto/vec_model.hpp"

namespace alto {

enum class ScenarioKind { kSyntheticTable1, kStationary, kPeriodicTwoSev, kBernoulliArrivals };

ScenarioKind scenario_kind_from_name(std::string_view name);
std::string_view scenario_name(ScenarioKind kind);
std::string_view scenario_summary(ScenarioKind kind);
std::span<const ScenarioKind> all_scenario_kinds();

struct TaskDistribution {
  double min_bits = 0.2e6;
  double max_bits = 1.0e6;
  double output_ratio = 0.0;
  double intensity_cycles_per_bit = 1000.0;
};

struct MobilityParams {
  double min_distance_m = 10.0;
  double max_distance_m = 200.0;
  double max_step_m = 10.0;
};

// Allocated CPU as a fraction of the vehicle's maximum frequency.
struct CpuShareRange {
  double low = 0.2;
  double high = 0.5;
};

// Two vehicles with fixed per-bit delays and alternating task sizes:
// eps0 on even periods, 1 - eps1 on odd periods (normalized units).
struct PeriodicParams {
  double eps0 = 0.1;
  double eps1 = 0.1;
  double mu1 = 1.0;
  double mu2 = 2.0;
  Period t1 = 1;
  Period t2 = 2;
};

// Synthetic per-bit delays for the stationary scenario: arm i (1-based) has
// mean means[i-1] and each period draws mean * (1 +/- jitter) with equal odds.
struct FixedDelayModel {
  std::vector<double> means;
  double jitter = 0.0;
};

// Simplified highway arrivals: every period each route spawns a vehicle with
// its probability; the vehicle stays a candidate for a uniform sojourn. Arm 1
// is an anchor vehicle that never leaves.
struct BernoulliParams {
  std::vector<double> route_probabilities = {0.1, 0.05, 0.05};
  Period sojourn_min = 200;
  Period sojourn_max = 720;
  double anchor_cpu_hz = 3.5e9;
  double cpu_min_hz = 3.0e9;
  double cpu_max_hz = 6.5e9;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kSyntheticTable1;
  Period horizon = 3000;
  TaskDistribution task;
  vec::RadioParams radio;
  MobilityParams mobility;
  CpuShareRange cpu_share;
  double beta0 = 0.5;
  // Quantiles of the input distribution used as normalization thresholds.
  double rho_lower = 0.05;
  double rho_upper = 0.05;
  // Explicit thresholds; overrides the quantiles when set.
  std::optional<NormalizationThresholds> thresholds;
  std::uint64_t seed = 1;
  // Reference-fleet arm ids alive for the whole run (stationary only).
  std::vector<ArmId> stationary_arms = {2, 3, 4, 5, 6, 7};
  // Replaces the physical model in the stationary scenario when set.
  std::optional<FixedDelayModel> fixed_delays;
  PeriodicParams periodic;
  BernoulliParams bernoulli;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Maximum CPU frequency of the eight reference-fleet vehicles, indexed by arm id - 1.
std::span<const double> fleet_max_cpu_hz();

struct ArmLifetime {
  ArmId id = 0;
  Period appear = 1;
  // First period the arm is gone (half-open lifetime).
  Period disappear = 2;
  double max_cpu_hz = 0.0;
};

struct Epoch {
  int index = 0;
  Period start = 1;
  Period end = 1;  // inclusive
  std::vector<ArmId> members;
};

class EpochSchedule {
 public:
  // Throws EnvironmentError when a lifetime is empty or some period in
  // [1, horizon] has no candidate.
  EpochSchedule(std::vector<ArmLifetime> arms, Period horizon);

  std::vector<ArmId> candidate_set(Period t) const;
  const std::vector<Epoch>& epochs() const { return epochs_; }
  // Zero-based index of the epoch containing t.
  int epoch_of(Period t) const;
  const std::vector<ArmLifetime>& arms() const { return arms_; }
  const ArmLifetime& arm(ArmId id) const;
  Period horizon() const { return horizon_; }

 private:
  std::vector<ArmLifetime> arms_;
  Period horizon_;
  std::vector<Epoch> epochs_;
};

// Builds the arm lifetimes for the configured scenario. The bernoulli
// scenario draws its arrivals from a stream derived from the seed.
EpochSchedule build_schedule(const ScenarioConfig& config);

struct SeVState {
  ArmId id = 0;
  double max_cpu_hz = 0.0;
  double distance_m = 0.0;
  bool alive = false;
  double alloc_cpu_hz = 0.0;
};

// distance + step, clamped to [min, max].
double clamp_step(double distance_m, double step_m, const MobilityParams& mobility);

SeVState advance_mobility(SeVState sev, std::mt19937_64& rng, const MobilityParams& mobility);
double sample_cpu_allocation(const SeVState& sev, std::mt19937_64& rng, const CpuShareRange& share);
vec::Task sample_task(const ScenarioConfig& config, Period t, std::mt19937_64& rng);

// Thresholds at the configured quantiles of the input-size law.
NormalizationThresholds threshold_from_quantiles(const ScenarioConfig& config);

// Samples of the clamped random-walk distance after a burn-in; approximates
// its long-run law.
std::vector<double> stationary_distance_pool(const MobilityParams& mobility, std::size_t steps,
                                             std::uint64_t seed);

// Everything the environment knows about one period, before any decision.
struct PeriodState {
  Period t = 0;
  int epoch = 0;
  std::vector<ArmId> candidates;
  vec::Task task;
  // True per-bit delay of each candidate, aligned with `candidates`.
  std::vector<double> bit_delays;

  double bit_delay_of(ArmId arm) const;
};

struct Observation {
  Period t = 0;
  int epoch = 0;
  ArmId chosen = 0;
  bool was_initialization = false;
  double input_bits = 0.0;
  double sum_delay = 0.0;
  // Hidden truth for metrics; policies never see it.
  std::vector<ArmId> candidates;
  std::vector<double> bit_delays;

  double bit_delay_of(ArmId arm) const;
};

class Environment {
 public:
  explicit Environment(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  const EpochSchedule& schedule() const { return schedule_; }
  Period next_period() const { return t_; }
  bool done() const { return t_ > config_.horizon; }

  // Draws the state of the next period and moves the clock forward.
  PeriodState advance();

  // One full offloading round: advance, select, reveal the delay, observe.
  Observation step(Policy& policy);

 private:
  double draw_bit_delay(SeVState& sev, const vec::Task& task);

  ScenarioConfig config_;
  EpochSchedule schedule_;
  std::mt19937_64 rng_;
  std::vector<SeVState> alive_;
  Period t_ = 1;
};

// Runs a policy over the whole horizon.
std::vector<Observation> run_episode(Environment& env, Policy& policy);

}  // namespace alto
