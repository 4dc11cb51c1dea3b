// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "alto/sim_env.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>

#include "alto/errors.hpp"

namespace alto {
namespace {

constexpr std::array kAllScenarios = {
    ScenarioKind::kSyntheticTable1, ScenarioKind::kStationary, ScenarioKind::kPeriodicTwoSev,
    ScenarioKind::kBernoulliArrivals};

constexpr std::array kFleetMaxCpuHz = {3.5e9, 4.5e9, 5.0e9, 5.5e9, 3.0e9, 6.5e9, 6.0e9, 4.0e9};

// Stream tags keep the schedule, environment and policy draws independent.
constexpr std::uint64_t kScheduleStream = 0x5c4ed;
constexpr std::uint64_t kEnvironmentStream = 0xe4b;

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

double fleet_cpu(ArmId id) {
  if (id < 1 || id > static_cast<ArmId>(kFleetMaxCpuHz.size())) {
    throw ConfigError("scenario.stationary_arms", "arm id " + std::to_string(id) +
                                                      " is not a reference-fleet vehicle (1..8)");
  }
  return kFleetMaxCpuHz[static_cast<std::size_t>(id - 1)];
}

bool uses_physical_model(const ScenarioConfig& config) {
  switch (config.kind) {
    case ScenarioKind::kSyntheticTable1:
    case ScenarioKind::kBernoulliArrivals:
      return true;
    case ScenarioKind::kStationary:
      return !config.fixed_delays.has_value();
    case ScenarioKind::kPeriodicTwoSev:
      return false;
  }
  return false;
}

std::vector<ArmLifetime> fleet_lifetimes(Period horizon) {
  const Period end = horizon + 1;
  return {
      {1, 1, 2001, kFleetMaxCpuHz[0]},    {2, 1, end, kFleetMaxCpuHz[1]},
      {3, 1, end, kFleetMaxCpuHz[2]},     {4, 1, end, kFleetMaxCpuHz[3]},
      {5, 1, 1001, kFleetMaxCpuHz[4]},    {6, 1001, 2001, kFleetMaxCpuHz[5]},
      {7, 1001, end, kFleetMaxCpuHz[6]},  {8, 2001, end, kFleetMaxCpuHz[7]},
  };
}

std::vector<ArmLifetime> bernoulli_lifetimes(const ScenarioConfig& config) {
  const BernoulliParams& params = config.bernoulli;
  std::mt19937_64 rng = make_stream(config.seed, kScheduleStream);
  std::uniform_int_distribution<Period> sojourn(params.sojourn_min, params.sojourn_max);
  std::uniform_real_distribution<double> cpu(params.cpu_min_hz, params.cpu_max_hz);

  std::vector<ArmLifetime> arms = {{1, 1, config.horizon + 1, params.anchor_cpu_hz}};
  ArmId next_id = 2;
  for (Period t = 1; t <= config.horizon; ++t) {
    for (double p : params.route_probabilities) {
      if (std::bernoulli_distribution(p)(rng)) {
        const Period stay = sojourn(rng);
        arms.push_back({next_id++, t, t + stay, cpu(rng)});
      }
    }
  }
  return arms;
}

}  // namespace

ScenarioKind scenario_kind_from_name(std::string_view name) {
  for (ScenarioKind kind : kAllScenarios) {
    if (scenario_name(kind) == name) return kind;
  }
  throw ConfigError("scenario.kind", "unknown scenario '" + std::string(name) + "'");
}

std::string_view scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kSyntheticTable1: return "synthetic-table1";
    case ScenarioKind::kStationary: return "stationary";
    case ScenarioKind::kPeriodicTwoSev: return "periodic-two-sev";
    case ScenarioKind::kBernoulliArrivals: return "bernoulli-arrivals";
  }
  return "unknown";
}

std::string_view scenario_summary(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kSyntheticTable1:
      return "8 vehicles over 3 epochs of 1000 periods, random-walk distances, "
             "uniform 20-50% CPU shares, inputs uniform in [0.2, 1] Mbit";
    case ScenarioKind::kStationary:
      return "fixed candidate set for the whole run; reference-fleet vehicles or synthetic "
             "fixed-mean delays";
    case ScenarioKind::kPeriodicTwoSev:
      return "two vehicles with fixed per-bit delays, arriving at t1 != t2, inputs "
             "alternating between eps0 and 1 - eps1";
    case ScenarioKind::kBernoulliArrivals:
      return "per-route Bernoulli arrivals with uniform sojourns plus one permanent "
             "anchor vehicle (simplified highway)";
  }
  return "";
}

std::span<const ScenarioKind> all_scenario_kinds() { return kAllScenarios; }

std::span<const double> fleet_max_cpu_hz() { return kFleetMaxCpuHz; }

void ScenarioConfig::validate() const {
  if (horizon < 1) throw ConfigError("scenario.horizon", "must be at least 1");
  if (!(0.0 <= rho_lower && rho_lower <= rho_upper && rho_upper <= 1.0)) {
    throw ConfigError("scenario.rho_lower", "need 0 <= rho_lower <= rho_upper <= 1");
  }
  if (!(task.min_bits > 0.0) || task.max_bits < task.min_bits) {
    throw ConfigError("scenario.task", "need 0 < min_bits <= max_bits");
  }
  if (task.output_ratio < 0.0) throw ConfigError("scenario.task.output_ratio", "must be >= 0");
  if (!(task.intensity_cycles_per_bit > 0.0)) {
    throw ConfigError("scenario.task.intensity_cycles_per_bit", "must be positive");
  }
  try {
    radio.validate();
  } catch (const DomainError& e) {
    throw ConfigError("scenario.radio", e.what());
  }
  if (!(mobility.min_distance_m > 0.0) || mobility.max_distance_m < mobility.min_distance_m ||
      mobility.max_step_m < 0.0) {
    throw ConfigError("scenario.mobility", "need 0 < min_distance_m <= max_distance_m, step >= 0");
  }
  if (!(cpu_share.low > 0.0) || cpu_share.high < cpu_share.low || cpu_share.high > 1.0) {
    throw ConfigError("scenario.cpu_share", "need 0 < low <= high <= 1");
  }
  if (beta0 < 0.0) throw ConfigError("scenario.beta0", "must be non-negative");
  if (thresholds) {
    try {
      thresholds->validate();
    } catch (const DomainError& e) {
      throw ConfigError("scenario.thresholds", e.what());
    }
  }

  switch (kind) {
    case ScenarioKind::kStationary:
      if (fixed_delays) {
        if (fixed_delays->means.empty()) {
          throw ConfigError("scenario.fixed_delays.means", "must not be empty");
        }
        for (double m : fixed_delays->means) {
          if (!(m > 0.0)) throw ConfigError("scenario.fixed_delays.means", "must be positive");
        }
        if (!(fixed_delays->jitter >= 0.0 && fixed_delays->jitter < 1.0)) {
          throw ConfigError("scenario.fixed_delays.jitter", "must lie in [0, 1)");
        }
      } else {
        if (stationary_arms.empty()) {
          throw ConfigError("scenario.stationary_arms", "must not be empty");
        }
        std::set<ArmId> seen;
        for (ArmId id : stationary_arms) {
          fleet_cpu(id);
          if (!seen.insert(id).second) {
            throw ConfigError("scenario.stationary_arms", "duplicate arm id");
          }
        }
      }
      break;
    case ScenarioKind::kPeriodicTwoSev:
      if (!(periodic.eps0 > 0.0 && periodic.eps0 < 0.5)) {
        throw ConfigError("scenario.periodic.eps0", "must lie in (0, 0.5)");
      }
      if (!(periodic.eps1 >= 0.0 && periodic.eps1 < 0.5)) {
        throw ConfigError("scenario.periodic.eps1", "must lie in [0, 0.5)");
      }
      if (!(periodic.mu1 > 0.0 && periodic.mu1 <= periodic.mu2)) {
        throw ConfigError("scenario.periodic.mu1", "need 0 < mu1 <= mu2");
      }
      if (periodic.t1 == periodic.t2 || std::min(periodic.t1, periodic.t2) != 1) {
        throw ConfigError("scenario.periodic.t1", "need t1 != t2 and one of them equal to 1");
      }
      break;
    case ScenarioKind::kBernoulliArrivals:
      for (double p : bernoulli.route_probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) {
          throw ConfigError("scenario.bernoulli.route_probabilities", "must lie in [0, 1]");
        }
      }
      if (bernoulli.sojourn_min < 1 || bernoulli.sojourn_max < bernoulli.sojourn_min) {
        throw ConfigError("scenario.bernoulli.sojourn_min", "need 1 <= sojourn_min <= sojourn_max");
      }
      if (!(bernoulli.anchor_cpu_hz > 0.0 && bernoulli.cpu_min_hz > 0.0 &&
            bernoulli.cpu_max_hz >= bernoulli.cpu_min_hz)) {
        throw ConfigError("scenario.bernoulli.cpu_min_hz", "CPU frequencies must be positive");
      }
      break;
    case ScenarioKind::kSyntheticTable1:
      break;
  }
}

EpochSchedule::EpochSchedule(std::vector<ArmLifetime> arms, Period horizon)
    : arms_(std::move(arms)), horizon_(horizon) {
  if (horizon_ < 1) throw EnvironmentError("horizon must be at least 1");
  std::sort(arms_.begin(), arms_.end(),
            [](const ArmLifetime& a, const ArmLifetime& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (arms_[i].appear >= arms_[i].disappear) {
      throw EnvironmentError("arm " + std::to_string(arms_[i].id) + " has an empty lifetime");
    }
    if (i > 0 && arms_[i].id == arms_[i - 1].id) {
      throw EnvironmentError("duplicate arm id " + std::to_string(arms_[i].id));
    }
  }

  std::vector<ArmId> previous;
  for (Period t = 1; t <= horizon_; ++t) {
    std::vector<ArmId> members = candidate_set(t);
    if (members.empty()) {
      throw EnvironmentError("no candidate vehicle at period " + std::to_string(t));
    }
    if (t == 1 || members != previous) {
      epochs_.push_back(Epoch{static_cast<int>(epochs_.size()), t, t, members});
      previous = std::move(members);
    } else {
      epochs_.back().end = t;
    }
  }
}

std::vector<ArmId> EpochSchedule::candidate_set(Period t) const {
  std::vector<ArmId> out;
  for (const ArmLifetime& arm : arms_) {
    if (arm.appear <= t && t < arm.disappear) out.push_back(arm.id);
  }
  return out;
}

int EpochSchedule::epoch_of(Period t) const {
  if (t < 1 || t > horizon_) throw InputError("period " + std::to_string(t) + " outside horizon");
  const auto it = std::upper_bound(epochs_.begin(), epochs_.end(), t,
                                   [](Period value, const Epoch& e) { return value < e.start; });
  return static_cast<int>(std::distance(epochs_.begin(), it)) - 1;
}

const ArmLifetime& EpochSchedule::arm(ArmId id) const {
  const auto it = std::lower_bound(arms_.begin(), arms_.end(), id,
                                   [](const ArmLifetime& a, ArmId value) { return a.id < value; });
  if (it == arms_.end() || it->id != id) {
    throw InputError("arm " + std::to_string(id) + " is not in the schedule");
  }
  return *it;
}

EpochSchedule build_schedule(const ScenarioConfig& config) {
  config.validate();
  const Period end = config.horizon + 1;
  std::vector<ArmLifetime> arms;
  switch (config.kind) {
    case ScenarioKind::kSyntheticTable1:
      arms = fleet_lifetimes(config.horizon);
      break;
    case ScenarioKind::kStationary:
      if (config.fixed_delays) {
        for (std::size_t i = 0; i < config.fixed_delays->means.size(); ++i) {
          arms.push_back({static_cast<ArmId>(i + 1), 1, end, 0.0});
        }
      } else {
        for (ArmId id : config.stationary_arms) arms.push_back({id, 1, end, fleet_cpu(id)});
      }
      break;
    case ScenarioKind::kPeriodicTwoSev:
      arms = {{1, config.periodic.t1, end, 0.0}, {2, config.periodic.t2, end, 0.0}};
      break;
    case ScenarioKind::kBernoulliArrivals:
      arms = bernoulli_lifetimes(config);
      break;
  }

  // Clip to the horizon; arms that would only appear later are dropped.
  std::erase_if(arms, [&](const ArmLifetime& a) { return a.appear > config.horizon; });
  for (ArmLifetime& a : arms) a.disappear = std::min(a.disappear, end);
  return EpochSchedule(std::move(arms), config.horizon);
}

double clamp_step(double distance_m, double step_m, const MobilityParams& mobility) {
  return std::clamp(distance_m + step_m, mobility.min_distance_m, mobility.max_distance_m);
}

SeVState advance_mobility(SeVState sev, std::mt19937_64& rng, const MobilityParams& mobility) {
  std::uniform_real_distribution<double> step(-mobility.max_step_m, mobility.max_step_m);
  sev.distance_m = clamp_step(sev.distance_m, step(rng), mobility);
  return sev;
}

double sample_cpu_allocation(const SeVState& sev, std::mt19937_64& rng,
                             const CpuShareRange& share) {
  if (share.low == share.high) return share.low * sev.max_cpu_hz;
  std::uniform_real_distribution<double> fraction(share.low, share.high);
  return fraction(rng) * sev.max_cpu_hz;
}

vec::Task sample_task(const ScenarioConfig& config, Period t, std::mt19937_64& rng) {
  vec::Task task;
  task.output_ratio = config.task.output_ratio;
  task.intensity_cycles_per_bit = config.task.intensity_cycles_per_bit;
  if (config.kind == ScenarioKind::kPeriodicTwoSev) {
    task.input_bits = t % 2 == 0 ? config.periodic.eps0 : 1.0 - config.periodic.eps1;
  } else if (config.task.min_bits == config.task.max_bits) {
    task.input_bits = config.task.min_bits;
  } else {
    std::uniform_real_distribution<double> size(config.task.min_bits, config.task.max_bits);
    task.input_bits = size(rng);
  }
  return task;
}

NormalizationThresholds threshold_from_quantiles(const ScenarioConfig& config) {
  if (config.thresholds) return *config.thresholds;
  if (config.kind == ScenarioKind::kPeriodicTwoSev) return {config.periodic.eps0, 1.0};
  const double lo = config.task.min_bits;
  const double span = config.task.max_bits - config.task.min_bits;
  return {lo + config.rho_lower * span, lo + config.rho_upper * span};
}

std::vector<double> stationary_distance_pool(const MobilityParams& mobility, std::size_t steps,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> step(-mobility.max_step_m, mobility.max_step_m);
  double distance = 0.5 * (mobility.min_distance_m + mobility.max_distance_m);
  constexpr int kBurnIn = 10000;
  for (int i = 0; i < kBurnIn; ++i) distance = clamp_step(distance, step(rng), mobility);
  std::vector<double> pool(steps);
  for (double& d : pool) {
    distance = clamp_step(distance, step(rng), mobility);
    d = distance;
  }
  return pool;
}

namespace {

double lookup(const std::vector<ArmId>& ids, const std::vector<double>& values, ArmId arm) {
  const auto it = std::find(ids.begin(), ids.end(), arm);
  if (it == ids.end()) throw InputError("arm " + std::to_string(arm) + " is not a candidate");
  return values[static_cast<std::size_t>(it - ids.begin())];
}

}  // namespace

double PeriodState::bit_delay_of(ArmId arm) const { return lookup(candidates, bit_delays, arm); }

double Observation::bit_delay_of(ArmId arm) const { return lookup(candidates, bit_delays, arm); }

Environment::Environment(ScenarioConfig config)
    : config_(std::move(config)),
      schedule_(build_schedule(config_)),
      rng_(make_stream(config_.seed, kEnvironmentStream)) {}

double Environment::draw_bit_delay(SeVState& sev, const vec::Task& task) {
  switch (config_.kind) {
    case ScenarioKind::kPeriodicTwoSev:
      return sev.id == 1 ? config_.periodic.mu1 : config_.periodic.mu2;
    case ScenarioKind::kStationary:
      if (config_.fixed_delays) {
        const double mean = config_.fixed_delays->means[static_cast<std::size_t>(sev.id - 1)];
        const double jitter = config_.fixed_delays->jitter;
        if (jitter == 0.0) return mean;
        return std::bernoulli_distribution(0.5)(rng_) ? mean * (1.0 + jitter)
                                                      : mean * (1.0 - jitter);
      }
      break;
    default:
      break;
  }
  const vec::LinkState link = vec::reciprocal_link(sev.distance_m, config_.radio);
  const double up = vec::uplink_rate(config_.radio, link.channel_gain_up);
  const double down = vec::downlink_rate(config_.radio, link.channel_gain_down);
  return vec::bit_offload_delay(task, up, down, {sev.max_cpu_hz, sev.alloc_cpu_hz});
}

PeriodState Environment::advance() {
  if (done()) throw EnvironmentError("horizon exhausted");
  PeriodState state;
  state.t = t_;
  state.candidates = schedule_.candidate_set(t_);
  if (state.candidates.empty()) {
    throw EnvironmentError("schedule invalid: empty candidate set at period " +
                           std::to_string(t_));
  }
  state.epoch = schedule_.epoch_of(t_);

  // Departed vehicles are dropped; arrivals start at a uniform distance.
  std::erase_if(alive_, [&](const SeVState& s) {
    return !std::binary_search(state.candidates.begin(), state.candidates.end(), s.id);
  });
  const bool physical = uses_physical_model(config_);
  std::vector<SeVState> next;
  next.reserve(state.candidates.size());
  for (ArmId id : state.candidates) {
    const auto it = std::find_if(alive_.begin(), alive_.end(),
                                 [id](const SeVState& s) { return s.id == id; });
    SeVState sev;
    if (it == alive_.end()) {
      sev = SeVState{id, schedule_.arm(id).max_cpu_hz, 0.0, true, 0.0};
      if (physical) {
        std::uniform_real_distribution<double> start(config_.mobility.min_distance_m,
                                                     config_.mobility.max_distance_m);
        sev.distance_m = start(rng_);
      }
    } else if (physical) {
      sev = advance_mobility(*it, rng_, config_.mobility);
    } else {
      sev = *it;
    }
    if (physical) sev.alloc_cpu_hz = sample_cpu_allocation(sev, rng_, config_.cpu_share);
    next.push_back(sev);
  }
  alive_ = std::move(next);

  state.task = sample_task(config_, t_, rng_);
  state.bit_delays.reserve(alive_.size());
  for (SeVState& sev : alive_) state.bit_delays.push_back(draw_bit_delay(sev, state.task));
  ++t_;
  return state;
}

Observation Environment::step(Policy& policy) {
  PeriodState state = advance();
  const Decision decision = policy.select(state.candidates, state.task.input_bits, state.t);
  if (!std::binary_search(state.candidates.begin(), state.candidates.end(),
                          decision.chosen_sev)) {
    throw EnvironmentError("policy chose arm " + std::to_string(decision.chosen_sev) +
                           " outside the candidate set");
  }
  const double bit_delay = state.bit_delay_of(decision.chosen_sev);
  const double sum_delay = state.task.input_bits * bit_delay;
  policy.observe(decision.chosen_sev, sum_delay, state.task.input_bits, state.t);

  Observation obs;
  obs.t = state.t;
  obs.epoch = state.epoch;
  obs.chosen = decision.chosen_sev;
  obs.was_initialization = decision.was_initialization;
  obs.input_bits = state.task.input_bits;
  obs.sum_delay = sum_delay;
  obs.candidates = std::move(state.candidates);
  obs.bit_delays = std::move(state.bit_delays);
  return obs;
}

std::vector<Observation> run_episode(Environment& env, Policy& policy) {
  std::vector<Observation> out;
  out.reserve(static_cast<std::size_t>(env.config().horizon));
  while (!env.done()) out.push_back(env.step(policy));
  return out;
}

}  // namespace alto
