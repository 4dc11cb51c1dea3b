// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "alto/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "alto/errors.hpp"

namespace alto {
namespace {

constexpr std::size_t kDistancePoolSteps = 1'000'000;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Welford accumulator.
struct Running {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double max = -kInf;

  void push(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
    max = std::max(max, x);
  }
};

}  // namespace

SampleSummary summarize(std::span<const double> values) {
  SampleSummary s;
  Running acc;
  for (double v : values) acc.push(v);
  s.count = acc.n;
  s.mean = acc.mean;
  if (acc.n < 2) {
    s.ci95_half_width = acc.n == 0 ? 0.0 : kInf;
    return s;
  }
  s.stddev = std::sqrt(acc.m2 / static_cast<double>(acc.n - 1));
  s.std_error = s.stddev / std::sqrt(static_cast<double>(acc.n));
  const boost::math::students_t dist(static_cast<double>(acc.n - 1));
  s.ci95_half_width = boost::math::quantile(dist, 0.975) * s.std_error;
  return s;
}

std::map<ArmId, ArmMeanEstimate> estimate_arm_means(const ScenarioConfig& config,
                                                    const EpochSchedule& schedule,
                                                    std::span<const ArmId> arms,
                                                    std::size_t sample_count,
                                                    std::uint64_t seed) {
  if (sample_count < kMinMeanSamples) {
    throw PrecisionError("mean estimation needs at least " + std::to_string(kMinMeanSamples) +
                         " samples, got " + std::to_string(sample_count));
  }
  std::mt19937_64 rng(seed);
  const bool fixed = config.kind == ScenarioKind::kPeriodicTwoSev ||
                     (config.kind == ScenarioKind::kStationary && config.fixed_delays);
  std::vector<double> pool;
  if (!fixed) pool = stationary_distance_pool(config.mobility, kDistancePoolSteps, seed + 1);

  vec::Task task;
  task.input_bits = 1.0;
  task.output_ratio = config.task.output_ratio;
  task.intensity_cycles_per_bit = config.task.intensity_cycles_per_bit;

  std::map<ArmId, ArmMeanEstimate> out;
  for (ArmId arm : std::set<ArmId>(arms.begin(), arms.end())) {
    Running acc;
    if (config.kind == ScenarioKind::kPeriodicTwoSev) {
      const double mu = arm == 1 ? config.periodic.mu1 : config.periodic.mu2;
      for (std::size_t i = 0; i < sample_count; ++i) acc.push(mu);
    } else if (fixed) {
      // The two-point law is symmetric about its mean, so the mean is exact.
      const double mean = config.fixed_delays->means.at(static_cast<std::size_t>(arm - 1));
      out[arm] = {mean, 0.0, mean * (1.0 + config.fixed_delays->jitter)};
      continue;
    } else {
      const double max_cpu = schedule.arm(arm).max_cpu_hz;
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::uniform_real_distribution<double> share(config.cpu_share.low, config.cpu_share.high);
      for (std::size_t i = 0; i < sample_count; ++i) {
        const vec::LinkState link = vec::reciprocal_link(pool[pick(rng)], config.radio);
        const double up = vec::uplink_rate(config.radio, link.channel_gain_up);
        const double down = vec::downlink_rate(config.radio, link.channel_gain_down);
        const double alloc = config.cpu_share.low == config.cpu_share.high
                                 ? config.cpu_share.low * max_cpu
                                 : share(rng) * max_cpu;
        acc.push(vec::bit_offload_delay(task, up, down, {max_cpu, alloc}));
      }
    }
    const double var = acc.n > 1 ? acc.m2 / static_cast<double>(acc.n - 1) : 0.0;
    out[arm] = {acc.mean, std::sqrt(var / static_cast<double>(acc.n)), acc.max};
  }
  return out;
}

namespace {

EpochOracle make_oracle(const Epoch& epoch, const std::map<ArmId, ArmMeanEstimate>& estimates) {
  EpochOracle oracle;
  oracle.epoch = epoch.index;
  oracle.start = epoch.start;
  oracle.end = epoch.end;
  oracle.mu_star = kInf;
  for (ArmId arm : epoch.members) {
    const ArmMeanEstimate& e = estimates.at(arm);
    oracle.means[arm] = e.mean;
    oracle.std_errors[arm] = e.std_error;
    oracle.delay_sup = std::max(oracle.delay_sup, e.sample_max);
    if (e.mean < oracle.mu_star) {
      oracle.mu_star = e.mean;
      oracle.best_arm = arm;
    }
  }
  for (const auto& [arm, mean] : oracle.means) {
    oracle.gaps[arm] = oracle.delay_sup > 0.0 ? (mean - oracle.mu_star) / oracle.delay_sup : 0.0;
  }
  return oracle;
}

}  // namespace

EpochOracle estimate_epoch_means(const ScenarioConfig& config, const EpochSchedule& schedule,
                                 int epoch, std::size_t sample_count, std::uint64_t seed) {
  if (epoch < 0 || epoch >= static_cast<int>(schedule.epochs().size())) {
    throw InputError("epoch " + std::to_string(epoch) + " is not in the schedule");
  }
  const Epoch& e = schedule.epochs()[static_cast<std::size_t>(epoch)];
  return make_oracle(e, estimate_arm_means(config, schedule, e.members, sample_count, seed));
}

std::vector<EpochOracle> estimate_all_epochs(const ScenarioConfig& config,
                                             const EpochSchedule& schedule,
                                             std::size_t sample_count, std::uint64_t seed) {
  std::vector<ArmId> ids;
  for (const ArmLifetime& arm : schedule.arms()) ids.push_back(arm.id);
  const auto estimates = estimate_arm_means(config, schedule, ids, sample_count, seed);
  std::vector<EpochOracle> out;
  out.reserve(schedule.epochs().size());
  for (const Epoch& e : schedule.epochs()) out.push_back(make_oracle(e, estimates));
  return out;
}

std::map<ArmId, double> oracle_means(std::span<const EpochOracle> oracles) {
  std::map<ArmId, double> out;
  for (const EpochOracle& o : oracles) out.insert(o.means.begin(), o.means.end());
  return out;
}

std::vector<double> RegretTrace::cumulative() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const RegretPoint& p : points) out.push_back(p.cumulative);
  return out;
}

RegretTrace regret_trace(std::span<const Observation> observations,
                         std::span<const EpochOracle> oracles) {
  RegretTrace trace;
  trace.points.reserve(observations.size());
  double regret = 0.0;
  double delay = 0.0;
  for (const Observation& obs : observations) {
    if (obs.epoch < 0 || obs.epoch >= static_cast<int>(oracles.size()) ||
        oracles[static_cast<std::size_t>(obs.epoch)].epoch != obs.epoch) {
      throw InputError("no oracle for epoch " + std::to_string(obs.epoch) + " at period " +
                       std::to_string(obs.t));
    }
    const EpochOracle& oracle = oracles[static_cast<std::size_t>(obs.epoch)];
    const double inst = obs.input_bits * (obs.bit_delay_of(obs.chosen) - oracle.mu_star);
    regret += inst;
    delay += obs.sum_delay;
    const double n = static_cast<double>(trace.points.size() + 1);
    trace.points.push_back({obs.t, inst, regret, delay / n});
  }
  return trace;
}

std::vector<double> mean_cumulative_regret(std::span<const RegretTrace> traces) {
  if (traces.empty()) return {};
  const std::size_t n = traces.front().points.size();
  std::vector<double> out(n, 0.0);
  for (const RegretTrace& trace : traces) {
    if (trace.points.size() != n) throw InputError("regret traces differ in length");
    for (std::size_t i = 0; i < n; ++i) out[i] += trace.points[i].cumulative;
  }
  for (double& v : out) v /= static_cast<double>(traces.size());
  return out;
}

double average_delay(std::span<const Observation> observations, Period first, Period last) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const Observation& obs : observations) {
    if (obs.t >= first && obs.t <= last) {
      sum += obs.sum_delay;
      ++n;
    }
  }
  if (n == 0) throw InputError("delay window contains no observation");
  return sum / static_cast<double>(n);
}

SublinearityFit sublinearity_fit(std::span<const double> cumulative, Period first, Period last,
                                 double ratio_limit) {
  if (first < 1 || last <= first || last > static_cast<Period>(cumulative.size())) {
    throw InputError("fit window must satisfy 1 <= first < last <= trace length");
  }
  const auto at = [&](Period t) { return cumulative[static_cast<std::size_t>(t - 1)]; };
  double sx = 0.0, sy = 0.0;
  const auto n = static_cast<double>(last - first + 1);
  for (Period t = first; t <= last; ++t) {
    sx += std::log(static_cast<double>(t));
    sy += at(t);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (Period t = first; t <= last; ++t) {
    const double dx = std::log(static_cast<double>(t)) - mx;
    const double dy = at(t) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  SublinearityFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (Period t = first; t <= last; ++t) {
    const double r = at(t) - (fit.intercept + fit.slope * std::log(static_cast<double>(t)));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
  fit.ratio_start = at(first) / static_cast<double>(first);
  fit.ratio_end = at(last) / static_cast<double>(last);
  fit.sublinear = fit.ratio_end <= ratio_limit * fit.ratio_start;
  return fit;
}

double ucb_pull_bound(double delta, double horizon) {
  if (!(delta > 0.0)) return kInf;
  return 8.0 * std::log(horizon) / (delta * delta) + 1.0 + std::numbers::pi * std::numbers::pi / 3.0;
}

BoundCheck check_ucb_pull_bound(std::span<const double> pull_counts, double delta,
                                Period horizon, std::size_t min_runs) {
  if (pull_counts.size() < min_runs) {
    throw InputError("bound check needs at least " + std::to_string(min_runs) + " runs, got " +
                     std::to_string(pull_counts.size()));
  }
  BoundCheck check;
  check.pulls = summarize(pull_counts);
  check.bound = ucb_pull_bound(delta, static_cast<double>(horizon));
  if (std::isinf(check.bound)) {
    check.vacuous = true;
    check.passed = true;
    check.margin = kInf;
    check.warning = "gap is zero; the bound is vacuous";
    return check;
  }
  check.margin = check.bound - check.pulls.ci95_upper();
  check.passed = check.margin > 0.0;
  return check;
}

std::vector<ArmBoundCheck> check_ucb_pull_bounds(const ScenarioConfig& config,
                                                 std::span<const std::vector<Observation>> runs,
                                                 const EpochOracle& oracle,
                                                 std::size_t min_runs) {
  if (config.kind != ScenarioKind::kStationary) {
    throw InputError("pull-bound check needs the stationary scenario");
  }
  double delay_sup = 0.0;
  for (const auto& run : runs) {
    for (const Observation& obs : run) {
      for (double u : obs.bit_delays) delay_sup = std::max(delay_sup, u);
    }
  }
  std::vector<ArmBoundCheck> out;
  for (const auto& [arm, mean] : oracle.means) {
    if (arm == oracle.best_arm) continue;
    std::vector<double> pulls;
    pulls.reserve(runs.size());
    for (const auto& run : runs) {
      pulls.push_back(static_cast<double>(
          std::count_if(run.begin(), run.end(), [a = arm](const Observation& o) { return o.chosen == a; })));
    }
    const double delta = (mean - oracle.mu_star) / delay_sup;
    out.push_back({arm, delta, check_ucb_pull_bound(pulls, delta, config.horizon, min_runs)});
  }
  return out;
}

double periodic_bound_coefficient(const PeriodicParams& params) {
  const double gap = (params.mu2 - params.mu1) / params.mu2;
  if (!(gap > 0.0)) return kInf;
  return 2.0 * params.mu2 * params.eps0 / gap;
}

PeriodicBoundCheck check_periodic_bound(const ScenarioConfig& config,
                                   std::span<const std::vector<Observation>> runs, double beta0,
                                   double slope_tolerance) {
  if (config.kind != ScenarioKind::kPeriodicTwoSev) {
    throw InputError("periodic bound check needs the periodic-two-sev scenario");
  }
  if (runs.empty()) throw InputError("periodic bound check needs at least one run");

  const PeriodicParams& p = config.periodic;
  const Period t0 = std::max(p.t1, p.t2);
  const Period horizon = config.horizon;
  const EpochSchedule schedule = build_schedule(config);
  const auto oracles = estimate_all_epochs(config, schedule, kMinMeanSamples);

  std::vector<RegretTrace> traces;
  traces.reserve(runs.size());
  std::vector<double> pulls;
  const double gap = (p.mu2 - p.mu1) / p.mu2;
  bool envelope = true;
  for (const auto& run : runs) {
    traces.push_back(regret_trace(run, oracles));
    std::int64_t k2 = 0;
    for (const Observation& obs : run) {
      if (obs.t < t0) continue;
      if (obs.chosen == 2) ++k2;
      if (gap > 0.0) {
        const double limit = beta0 * std::log(static_cast<double>(obs.t)) / (gap * gap) + 1.0;
        if (static_cast<double>(k2) > limit) envelope = false;
      }
    }
    pulls.push_back(static_cast<double>(k2));
  }

  PeriodicBoundCheck check;
  check.coefficient = periodic_bound_coefficient(p);
  check.leading_term = check.coefficient * std::log(static_cast<double>(horizon));
  const std::vector<double> mean = mean_cumulative_regret(traces);
  check.mean_final_regret = mean.back();
  check.mean_suboptimal_pulls = summarize(pulls).mean;
  check.pull_cost = (p.mu2 - p.mu1) * check.mean_suboptimal_pulls;
  check.pull_envelope_holds = envelope;

  if (std::isinf(check.coefficient)) {
    // Equal delays: every choice is optimal and the bound says nothing.
    check.passed = std::all_of(mean.begin(), mean.end(), [](double r) { return r == 0.0; });
    return check;
  }
  check.fitted_constant = -kInf;
  for (Period t = t0; t <= horizon; ++t) {
    check.fitted_constant =
        std::max(check.fitted_constant, mean[static_cast<std::size_t>(t - 1)] -
                                            check.coefficient * std::log(static_cast<double>(t)));
  }
  if (horizon > t0) {
    check.fit = sublinearity_fit(mean, t0, horizon);
    check.slope_ratio = check.coefficient > 0.0 ? check.fit.slope / check.coefficient : kInf;
  }
  check.passed = envelope && check.fit.slope <= (1.0 + slope_tolerance) * check.coefficient &&
                 check.mean_final_regret <= check.leading_term + check.fitted_constant;
  return check;
}

}  // namespace alto
