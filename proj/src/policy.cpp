// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "alto/policy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "alto/errors.hpp"

namespace alto {
namespace {

constexpr std::array kAllKinds = {PolicyKind::kAlto,   PolicyKind::kUcb,
                                  PolicyKind::kVucb,   PolicyKind::kAdaUcb,
                                  PolicyKind::kRandom, PolicyKind::kOracle};

std::vector<ArmId> sorted_candidates(std::span<const ArmId> candidates) {
  if (candidates.empty()) throw EnvironmentError("candidate set is empty");
  std::vector<ArmId> out(candidates.begin(), candidates.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void NormalizationThresholds::validate() const {
  if (!(lower > 0.0) || !(upper > 0.0)) throw DomainError("thresholds must be positive");
  if (lower > upper) throw DomainError("lower threshold exceeds upper threshold");
}

double normalize_input(double input_bits, const NormalizationThresholds& thresholds) {
  if (thresholds.upper == thresholds.lower) return input_bits <= thresholds.lower ? 0.0 : 1.0;
  const double scaled = (input_bits - thresholds.lower) / (thresholds.upper - thresholds.lower);
  return std::max(std::min(scaled, 1.0), 0.0);
}

double padded_utility(const PaddingRule& rule, const ArmStats& arm, Period t, double x_norm,
                      double beta) {
  if (arm.pull_count < 1) throw SequencingError("utility of an arm that was never pulled");
  const Period origin = rule.occurrence_aware ? arm.occurrence_time : 0;
  if (t <= origin) throw SequencingError("utility requested at or before the arm's clock origin");
  const double weight = rule.input_aware ? 1.0 - x_norm : 1.0;
  const double clock = std::log(static_cast<double>(t - origin));
  return arm.empirical_bit_delay -
         std::sqrt(beta * weight * clock / static_cast<double>(arm.pull_count));
}

double alto_utility(const ArmStats& arm, Period t, double x_norm, double beta) {
  return padded_utility(PaddingRule{true, true}, arm, t, x_norm, beta);
}

PolicyKind policy_kind_from_name(std::string_view name) {
  for (PolicyKind kind : kAllKinds) {
    if (policy_name(kind) == name) return kind;
  }
  throw ConfigError("policy", "unknown policy '" + std::string(name) + "'");
}

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kAlto: return "alto";
    case PolicyKind::kUcb: return "ucb";
    case PolicyKind::kVucb: return "vucb";
    case PolicyKind::kAdaUcb: return "adaucb";
    case PolicyKind::kRandom: return "random";
    case PolicyKind::kOracle: return "oracle";
  }
  return "unknown";
}

std::span<const PolicyKind> all_policy_kinds() { return kAllKinds; }

Decision Policy::remember(Decision decision, Period t) {
  pending_ = Pending{decision.chosen_sev, t, decision.was_initialization};
  return decision;
}

Policy::Pending Policy::take_pending(ArmId arm, Period t) {
  if (!pending_ || pending_->arm != arm || pending_->t != t) {
    throw SequencingError("observation for arm " + std::to_string(arm) + " at period " +
                          std::to_string(t) + " does not match the last selection");
  }
  const Pending out = *pending_;
  pending_.reset();
  ++total_pulls_;
  return out;
}

IndexPolicy::IndexPolicy(PolicyKind kind, PaddingRule rule, const PolicyOptions& options)
    : kind_(kind),
      rule_(rule),
      thresholds_(options.thresholds),
      zero_clock_(options.zero_occurrence_clock) {
  if (options.beta0 < 0.0) throw DomainError("beta0 must be non-negative");
  if (rule_.input_aware) thresholds_.validate();
  stats_.exploration_weight = options.beta0;
}

Decision IndexPolicy::select(std::span<const ArmId> candidates, double input_bits, Period t) {
  const std::vector<ArmId> arms = sorted_candidates(candidates);

  // Vehicles that left the candidate set are forgotten; a return is a new arm.
  std::erase_if(stats_.arms, [&](const auto& entry) {
    return !std::binary_search(arms.begin(), arms.end(), entry.first);
  });

  for (ArmId arm : arms) {
    if (!stats_.arms.contains(arm)) return remember(Decision{arm, true, {}}, t);
  }

  const double x_norm = rule_.input_aware ? normalize_input(input_bits, thresholds_) : 0.0;
  const double beta = stats_.beta();

  Decision decision;
  decision.utility_snapshot.reserve(arms.size());
  double best = 0.0;
  for (ArmId arm : arms) {
    ArmStats view = stats_.arms.at(arm);
    if (zero_clock_) view.occurrence_time = 0;
    const double utility = padded_utility(rule_, view, t, x_norm, beta);
    decision.utility_snapshot.emplace_back(arm, utility);
    if (decision.utility_snapshot.size() == 1 || utility < best) {
      best = utility;
      decision.chosen_sev = arm;
    }
  }
  return remember(std::move(decision), t);
}

void IndexPolicy::observe(ArmId arm, double sum_delay, double input_bits, Period t) {
  if (!(input_bits > 0.0)) throw DomainError("input_bits must be positive");
  const Pending pending = take_pending(arm, t);
  const double bit_delay = sum_delay / input_bits;

  ArmStats& stats = stats_.arms[arm];
  if (pending.initialization) {
    stats = ArmStats{bit_delay, 1, t};
  } else {
    const auto k = static_cast<double>(stats.pull_count);
    stats.empirical_bit_delay = (stats.empirical_bit_delay * k + bit_delay) / (k + 1.0);
    ++stats.pull_count;
  }
  stats_.running_delay_max = std::max(stats_.running_delay_max, bit_delay);
}

RandomPolicy::RandomPolicy(std::uint64_t seed) : rng_(seed) {}

Decision RandomPolicy::select(std::span<const ArmId> candidates, double /*input_bits*/,
                              Period t) {
  const std::vector<ArmId> arms = sorted_candidates(candidates);
  std::uniform_int_distribution<std::size_t> pick(0, arms.size() - 1);
  return remember(Decision{arms[pick(rng_)], false, {}}, t);
}

void RandomPolicy::observe(ArmId arm, double /*sum_delay*/, double /*input_bits*/, Period t) {
  take_pending(arm, t);
}

OraclePolicy::OraclePolicy(std::map<ArmId, double> true_means)
    : true_means_(std::move(true_means)) {}

Decision OraclePolicy::select(std::span<const ArmId> candidates, double /*input_bits*/,
                              Period t) {
  const std::vector<ArmId> arms = sorted_candidates(candidates);
  Decision decision;
  double best = 0.0;
  for (ArmId arm : arms) {
    const auto it = true_means_.find(arm);
    if (it == true_means_.end()) {
      throw InputError("oracle has no mean for arm " + std::to_string(arm));
    }
    decision.utility_snapshot.emplace_back(arm, it->second);
    if (decision.utility_snapshot.size() == 1 || it->second < best) {
      best = it->second;
      decision.chosen_sev = arm;
    }
  }
  return remember(std::move(decision), t);
}

void OraclePolicy::observe(ArmId arm, double /*sum_delay*/, double /*input_bits*/, Period t) {
  take_pending(arm, t);
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyOptions& options) {
  switch (kind) {
    case PolicyKind::kAlto:
      return std::make_unique<IndexPolicy>(kind, PaddingRule{true, true}, options);
    case PolicyKind::kUcb:
      return std::make_unique<IndexPolicy>(kind, PaddingRule{false, false}, options);
    case PolicyKind::kVucb:
      return std::make_unique<IndexPolicy>(kind, PaddingRule{false, true}, options);
    case PolicyKind::kAdaUcb:
      return std::make_unique<IndexPolicy>(kind, PaddingRule{true, false}, options);
    case PolicyKind::kRandom:
      return std::make_unique<RandomPolicy>(options.seed);
    case PolicyKind::kOracle:
      return std::make_unique<OraclePolicy>(options.true_means);
  }
  throw ConfigError("policy", "unhandled policy kind");
}

}  // namespace alto
