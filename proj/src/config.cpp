// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "alto/errors.hpp"
#include "alto/experiment.hpp"

namespace alto {
namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : -1; }

void check_keys(const YAML::Node& map, const std::string& section,
                std::initializer_list<std::string_view> allowed) {
  if (!map.IsMap()) throw ConfigError(section, "expected a mapping", line_of(map));
  for (const auto& entry : map) {
    const auto key = entry.first.as<std::string>();
    bool known = false;
    for (std::string_view a : allowed) known = known || a == key;
    if (!known) {
      throw ConfigError(section.empty() ? key : section + "." + key, "unknown key",
                        line_of(entry.first));
    }
  }
}

template <typename T>
void read(const YAML::Node& map, const char* key, const std::string& section, T& out) {
  const YAML::Node node = map[key];
  if (!node) return;
  try {
    out = node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(section + "." + key, "has the wrong type", line_of(node));
  }
}

template <typename T>
void read_opt(const YAML::Node& map, const char* key, const std::string& section,
              std::optional<T>& out) {
  if (!map[key]) return;
  T value{};
  read(map, key, section, value);
  out = value;
}

// Re-raises a validation failure with the line of the section it came from.
template <typename Fn>
void with_line(const YAML::Node& node, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    if (e.line() > 0) throw;
    std::string message = e.what();
    const auto pos = message.find(": ");
    throw ConfigError(e.field(), pos == std::string::npos ? message : message.substr(pos + 2),
                      line_of(node));
  }
}

void parse_scenario(const YAML::Node& node, ExperimentConfig& config) {
  ScenarioConfig& s = config.scenario;
  check_keys(node, "scenario",
             {"kind", "horizon", "beta0", "rho_lower", "rho_upper", "thresholds", "task", "radio",
              "mobility", "cpu_share", "stationary_arms", "fixed_delays", "periodic", "bernoulli",
              "oracle_samples"});
  if (node["kind"]) {
    const std::string kind = node["kind"].as<std::string>();
    with_line(node["kind"], [&] { s.kind = scenario_kind_from_name(kind); });
  }
  read(node, "horizon", "scenario", s.horizon);
  read(node, "beta0", "scenario", s.beta0);
  read(node, "rho_lower", "scenario", s.rho_lower);
  read(node, "rho_upper", "scenario", s.rho_upper);
  read(node, "oracle_samples", "scenario", config.oracle_samples);
  read(node, "stationary_arms", "scenario", s.stationary_arms);

  if (const YAML::Node t = node["thresholds"]) {
    check_keys(t, "scenario.thresholds", {"lower", "upper"});
    NormalizationThresholds th;
    read(t, "lower", "scenario.thresholds", th.lower);
    read(t, "upper", "scenario.thresholds", th.upper);
    s.thresholds = th;
  }
  if (const YAML::Node t = node["task"]) {
    const std::string sec = "scenario.task";
    check_keys(t, sec, {"min_bits", "max_bits", "output_ratio", "intensity_cycles_per_bit"});
    read(t, "min_bits", sec, s.task.min_bits);
    read(t, "max_bits", sec, s.task.max_bits);
    read(t, "output_ratio", sec, s.task.output_ratio);
    read(t, "intensity_cycles_per_bit", sec, s.task.intensity_cycles_per_bit);
  }
  if (const YAML::Node r = node["radio"]) {
    const std::string sec = "scenario.radio";
    check_keys(r, sec,
               {"tx_power_watts", "bandwidth_hz", "noise_watts", "pathloss_db",
                "interference_up_watts", "interference_down_watts"});
    read(r, "tx_power_watts", sec, s.radio.tx_power_watts);
    read(r, "bandwidth_hz", sec, s.radio.bandwidth_hz);
    read(r, "noise_watts", sec, s.radio.noise_watts);
    if (r["pathloss_db"]) {
      double db = 0.0;
      read(r, "pathloss_db", sec, db);
      s.radio.pathloss_const = vec::db_to_linear(db);
    }
    read(r, "interference_up_watts", sec, s.radio.interference_up_watts);
    read(r, "interference_down_watts", sec, s.radio.interference_down_watts);
  }
  if (const YAML::Node m = node["mobility"]) {
    const std::string sec = "scenario.mobility";
    check_keys(m, sec, {"min_distance_m", "max_distance_m", "max_step_m"});
    read(m, "min_distance_m", sec, s.mobility.min_distance_m);
    read(m, "max_distance_m", sec, s.mobility.max_distance_m);
    read(m, "max_step_m", sec, s.mobility.max_step_m);
  }
  if (const YAML::Node c = node["cpu_share"]) {
    check_keys(c, "scenario.cpu_share", {"low", "high"});
    read(c, "low", "scenario.cpu_share", s.cpu_share.low);
    read(c, "high", "scenario.cpu_share", s.cpu_share.high);
  }
  if (const YAML::Node f = node["fixed_delays"]) {
    check_keys(f, "scenario.fixed_delays", {"means", "jitter"});
    FixedDelayModel model;
    read(f, "means", "scenario.fixed_delays", model.means);
    read(f, "jitter", "scenario.fixed_delays", model.jitter);
    s.fixed_delays = model;
  }
  if (const YAML::Node p = node["periodic"]) {
    const std::string sec = "scenario.periodic";
    check_keys(p, sec, {"eps0", "eps1", "mu1", "mu2", "t1", "t2"});
    read(p, "eps0", sec, s.periodic.eps0);
    read(p, "eps1", sec, s.periodic.eps1);
    read(p, "mu1", sec, s.periodic.mu1);
    read(p, "mu2", sec, s.periodic.mu2);
    read(p, "t1", sec, s.periodic.t1);
    read(p, "t2", sec, s.periodic.t2);
  }
  if (const YAML::Node b = node["bernoulli"]) {
    const std::string sec = "scenario.bernoulli";
    check_keys(b, sec,
               {"route_probabilities", "sojourn_min", "sojourn_max", "anchor_cpu_hz",
                "cpu_min_hz", "cpu_max_hz"});
    read(b, "route_probabilities", sec, s.bernoulli.route_probabilities);
    read(b, "sojourn_min", sec, s.bernoulli.sojourn_min);
    read(b, "sojourn_max", sec, s.bernoulli.sojourn_max);
    read(b, "anchor_cpu_hz", sec, s.bernoulli.anchor_cpu_hz);
    read(b, "cpu_min_hz", sec, s.bernoulli.cpu_min_hz);
    read(b, "cpu_max_hz", sec, s.bernoulli.cpu_max_hz);
  }
  with_line(node, [&] { s.validate(); });
}

PolicySpec parse_policy(const YAML::Node& node, double default_beta0) {
  PolicySpec spec;
  spec.beta0 = default_beta0;
  if (node.IsScalar()) {
    const std::string name = node.as<std::string>();
    with_line(node, [&] { spec.kind = policy_kind_from_name(name); });
    return spec;
  }
  check_keys(node, "policies[]", {"name", "beta0", "rho_lower", "rho_upper", "label"});
  if (!node["name"]) throw ConfigError("policies[].name", "is required", line_of(node));
  const std::string name = node["name"].as<std::string>();
  with_line(node["name"], [&] { spec.kind = policy_kind_from_name(name); });
  read(node, "beta0", "policies[]", spec.beta0);
  read_opt(node, "rho_lower", "policies[]", spec.rho_lower);
  read_opt(node, "rho_upper", "policies[]", spec.rho_upper);
  read(node, "label", "policies[]", spec.label);
  return spec;
}

void parse_seeds(const YAML::Node& node, ExperimentConfig& config) {
  if (node.IsSequence()) {
    for (const auto& s : node) config.seeds.push_back(s.as<std::uint64_t>());
  } else if (node.IsMap()) {
    check_keys(node, "seeds", {"base", "count"});
    std::uint64_t base = 1;
    std::int64_t count = 0;
    read(node, "base", "seeds", base);
    read(node, "count", "seeds", count);
    if (count < 1) throw ConfigError("seeds.count", "must be at least 1", line_of(node));
    for (std::int64_t i = 0; i < count; ++i) config.seeds.push_back(base + static_cast<std::uint64_t>(i));
  } else {
    throw ConfigError("seeds", "expected a list or {base, count}", line_of(node));
  }
}

void parse_output(const YAML::Node& node, ExperimentConfig& config) {
  check_keys(node, "output", {"directory", "stride", "jobs", "plots"});
  if (node["directory"]) config.output_dir = node["directory"].as<std::string>();
  read(node, "stride", "output", config.stride);
  read(node, "jobs", "output", config.jobs);
  if (const YAML::Node p = node["plots"]) {
    check_keys(p, "output.plots", {"regret_vs_t", "avg_delay_vs_t", "beta_sweep", "threshold_sweep"});
    read(p, "regret_vs_t", "output.plots", config.plots.regret_vs_t);
    read(p, "avg_delay_vs_t", "output.plots", config.plots.avg_delay_vs_t);
    read(p, "beta_sweep", "output.plots", config.plots.beta_sweep);
    read(p, "threshold_sweep", "output.plots", config.plots.threshold_sweep);
  }
}

std::string default_label(const PolicySpec& spec, double scenario_beta0) {
  std::string label(policy_name(spec.kind));
  const bool learns = spec.kind != PolicyKind::kRandom && spec.kind != PolicyKind::kOracle;
  if (learns && spec.beta0 != scenario_beta0) label += fmt::format("[beta0={:g}]", spec.beta0);
  if (spec.rho_lower || spec.rho_upper) {
    label += fmt::format("[rho={:g}:{:g}]", spec.rho_lower.value_or(-1.0), spec.rho_upper.value_or(-1.0));
  }
  return label;
}

}  // namespace

void ExperimentConfig::finalize() {
  scenario.validate();
  if (policies.empty()) throw ConfigError("policies", "at least one policy is required");
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (stride < 1) throw ConfigError("output.stride", "must be at least 1");
  if (oracle_samples < kMinMeanSamples) {
    throw ConfigError("scenario.oracle_samples",
                      "must be at least " + std::to_string(kMinMeanSamples));
  }
  std::set<std::uint64_t> unique_seeds(seeds.begin(), seeds.end());
  if (unique_seeds.size() != seeds.size()) throw ConfigError("seeds", "seeds must be distinct");

  std::set<std::string> labels;
  for (PolicySpec& p : policies) {
    if (p.beta0 < 0.0) throw ConfigError("policies[].beta0", "must be non-negative");
    const double lo = p.rho_lower.value_or(scenario.rho_lower);
    const double hi = p.rho_upper.value_or(scenario.rho_upper);
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) {
      throw ConfigError("policies[].rho_lower", "need 0 <= rho_lower <= rho_upper <= 1");
    }
    if (p.label.empty()) p.label = default_label(p, scenario.beta0);
    if (p.label.find_first_of(",\"\n") != std::string::npos) {
      throw ConfigError("policies[].label", "must not contain commas, quotes or newlines");
    }
    if (!labels.insert(p.label).second) {
      throw ConfigError("policies[].label", "duplicate policy label '" + p.label + "'");
    }
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.msg, e.mark.line + 1);
  }
  ExperimentConfig config;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    config.output_dir = dir;
  }
  if (!root || root.IsNull()) throw ConfigError("", "config is empty");
  check_keys(root, "", {"scenario", "policies", "seeds", "output"});

  try {
    if (root["scenario"]) parse_scenario(root["scenario"], config);
    if (const YAML::Node p = root["policies"]) {
      if (!p.IsSequence()) throw ConfigError("policies", "expected a list", line_of(p));
      for (const auto& entry : p) {
        config.policies.push_back(parse_policy(entry, config.scenario.beta0));
      }
    }
    if (root["seeds"]) parse_seeds(root["seeds"], config);
    if (root["output"]) parse_output(root["output"], config);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
  }
  config.finalize();
  return config;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::vector<std::uint64_t> parse_seed_spec(std::string_view spec, std::uint64_t default_base) {
  const auto parse_int = [&](std::string_view s) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("--seeds", "expected N or base:count, got '" + std::string(spec) + "'");
    }
    return value;
  };
  std::uint64_t base = default_base;
  std::uint64_t count = 0;
  if (const auto colon = spec.find(':'); colon != std::string_view::npos) {
    base = parse_int(spec.substr(0, colon));
    count = parse_int(spec.substr(colon + 1));
  } else {
    count = parse_int(spec);
  }
  if (count == 0) throw ConfigError("--seeds", "seed count must be at least 1");
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(base + i);
  return out;
}

}  // namespace alto
