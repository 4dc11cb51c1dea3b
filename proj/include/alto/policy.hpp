// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Online service-vehicle selection policies.
//
// Every policy follows the same two-call protocol per period: select() sees
// the candidate set and the task's input size, then observe() receives the
// end-to-end delay of the chosen vehicle only. The index policies (ALTO, UCB,
// VUCB, AdaUCB) learn the per-bit delay of each arm and pick the arm with the
// smallest padded utility
//
//     u_hat = u_bar - sqrt(beta * (1 - x_norm) * ln(clock) / k)
//
// where beta = beta0 * u_m^2 uses the largest per-bit delay observed so far.
// ALTO is both input-aware (x_norm from the task size) and occurrence-aware
// (clock = t - t_n). The baselines switch one or both of those off.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace alto {

using ArmId = int;
using Period = std::int64_t;

struct ArmStats {
  double empirical_bit_delay = 0.0;
  std::int64_t pull_count = 0;
  Period occurrence_time = 0;
};

struct PolicyStats {
  std::map<ArmId, ArmStats> arms;
  // Largest observed d_sum / x; stands in for the unknown delay supremum.
  double running_delay_max = 0.0;
  double exploration_weight = 0.5;

  double beta() const { return exploration_weight * running_delay_max * running_delay_max; }
};

struct NormalizationThresholds {
  double lower = 0.0;
  double upper = 0.0;

  void validate() const;
};

// Maps the input size to [0, 1]. With lower == upper the map is a step:
// 0 at or below the threshold, 1 above it.
double normalize_input(double input_bits, const NormalizationThresholds& thresholds);

// Which parts of the padding a policy uses.
struct PaddingRule {
  bool input_aware = true;
  bool occurrence_aware = true;
};

// ALTO utility of one arm at period t. Throws SequencingError when
// t <= occurrence_time or the arm has never been pulled.
double alto_utility(const ArmStats& arm, Period t, double x_norm, double beta);

// Utility under an arbitrary padding rule. Non-occurrence-aware rules use the
// absolute period t as clock; non-input-aware rules ignore x_norm.
double padded_utility(const PaddingRule& rule, const ArmStats& arm, Period t, double x_norm,
                      double beta);

struct Decision {
  ArmId chosen_sev = 0;
  bool was_initialization = false;
  std::vector<std::pair<ArmId, double>> utility_snapshot;
};

enum class PolicyKind { kAlto, kUcb, kVucb, kAdaUcb, kRandom, kOracle };

// Accepts "alto", "ucb", "vucb", "adaucb", "random", "oracle".
PolicyKind policy_kind_from_name(std::string_view name);
std::string_view policy_name(PolicyKind kind);
std::span<const PolicyKind> all_policy_kinds();

struct PolicyOptions {
  double beta0 = 0.5;
  NormalizationThresholds thresholds;
  // Pin t_n = 0 for every arm, which collapses the occurrence clock onto t.
  bool zero_occurrence_clock = false;
  std::uint64_t seed = 0;
  // True mean per-bit delay of each arm; consulted by the oracle only.
  std::map<ArmId, double> true_means;
};

class Policy {
 public:
  virtual ~Policy() = default;

  // Throws EnvironmentError on an empty candidate set.
  virtual Decision select(std::span<const ArmId> candidates, double input_bits, Period t) = 0;

  // Feeds back the sum delay of the arm chosen by the last select(). Throws
  // SequencingError for any other arm or period.
  virtual void observe(ArmId arm, double sum_delay, double input_bits, Period t) = 0;

  virtual PolicyKind kind() const = 0;
  std::string_view name() const { return policy_name(kind()); }
  std::int64_t total_pulls() const { return total_pulls_; }

 protected:
  struct Pending {
    ArmId arm;
    Period t;
    bool initialization;
  };

  // Records the decision so the matching observe() can be checked.
  Decision remember(Decision decision, Period t);
  Pending take_pending(ArmId arm, Period t);

  std::int64_t total_pulls_ = 0;

 private:
  std::optional<Pending> pending_;
};

// Shared implementation of ALTO and the UCB-family baselines.
class IndexPolicy : public Policy {
 public:
  IndexPolicy(PolicyKind kind, PaddingRule rule, const PolicyOptions& options);

  Decision select(std::span<const ArmId> candidates, double input_bits, Period t) override;
  void observe(ArmId arm, double sum_delay, double input_bits, Period t) override;
  PolicyKind kind() const override { return kind_; }

  const PolicyStats& stats() const { return stats_; }

 private:
  PolicyKind kind_;
  PaddingRule rule_;
  NormalizationThresholds thresholds_;
  bool zero_clock_;
  PolicyStats stats_;
};

class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed);

  Decision select(std::span<const ArmId> candidates, double input_bits, Period t) override;
  void observe(ArmId arm, double sum_delay, double input_bits, Period t) override;
  PolicyKind kind() const override { return PolicyKind::kRandom; }

 private:
  std::mt19937_64 rng_;
};

// Genie baseline: always picks the candidate with the smallest true mean.
class OraclePolicy : public Policy {
 public:
  explicit OraclePolicy(std::map<ArmId, double> true_means);

  Decision select(std::span<const ArmId> candidates, double input_bits, Period t) override;
  void observe(ArmId arm, double sum_delay, double input_bits, Period t) override;
  PolicyKind kind() const override { return PolicyKind::kOracle; }

 private:
  std::map<ArmId, double> true_means_;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyOptions& options);

}  // namespace alto
