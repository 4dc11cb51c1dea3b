// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "alto/vec_model.hpp"

#include <cmath>
#include <string>

#include "alto/errors.hpp"

namespace alto::vec {
namespace {

double shannon_rate(const RadioParams& radio, double gain, double interference) {
  if (gain < 0.0) throw DomainError("channel gain must be non-negative");
  const double sinr = radio.tx_power_watts * gain / (radio.noise_watts + interference);
  return radio.bandwidth_hz * std::log2(1.0 + sinr);
}

void require_rate(double rate, const char* what) {
  if (!(rate > 0.0)) throw UnreachableLinkError(std::string(what) + " rate is zero");
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void RadioParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth_hz must be positive");
  if (!(noise_watts > 0.0)) throw DomainError("noise_watts must be positive");
  if (tx_power_watts < 0.0 || pathloss_const < 0.0 || interference_up_watts < 0.0 ||
      interference_down_watts < 0.0) {
    throw DomainError("radio parameters must be non-negative");
  }
}

void Task::validate() const {
  if (!(input_bits > 0.0)) throw DomainError("input_bits must be positive");
  if (output_ratio < 0.0) throw DomainError("output_ratio must be non-negative");
  if (!(intensity_cycles_per_bit > 0.0)) {
    throw DomainError("intensity_cycles_per_bit must be positive");
  }
}

void ComputeState::validate() const {
  if (!(alloc_cpu_hz > 0.0)) throw NoResourceError("no CPU allocated to the task");
  if (alloc_cpu_hz > max_cpu_hz) throw DomainError("allocation exceeds max CPU frequency");
}

double pathloss_gain(double distance_m, double pathloss_const) {
  if (!(distance_m > 0.0)) throw DomainError("distance must be positive");
  return pathloss_const / (distance_m * distance_m);
}

LinkState reciprocal_link(double distance_m, const RadioParams& radio) {
  const double gain = pathloss_gain(distance_m, radio.pathloss_const);
  return {distance_m, gain, gain};
}

double uplink_rate(const RadioParams& radio, double gain_up) {
  return shannon_rate(radio, gain_up, radio.interference_up_watts);
}

double downlink_rate(const RadioParams& radio, double gain_down) {
  return shannon_rate(radio, gain_down, radio.interference_down_watts);
}

double upload_delay(const Task& task, double rate_up) {
  require_rate(rate_up, "uplink");
  return task.input_bits / rate_up;
}

double compute_delay(const Task& task, const ComputeState& compute) {
  if (!(compute.alloc_cpu_hz > 0.0)) throw NoResourceError("no CPU allocated to the task");
  return task.input_bits * task.intensity_cycles_per_bit / compute.alloc_cpu_hz;
}

double download_delay(const Task& task, double rate_down) {
  require_rate(rate_down, "downlink");
  return task.output_bits() / rate_down;
}

double sum_delay(const Task& task, double rate_up, double rate_down,
                 const ComputeState& compute) {
  return upload_delay(task, rate_up) + compute_delay(task, compute) +
         download_delay(task, rate_down);
}

double bit_offload_delay(const Task& task, double rate_up, double rate_down,
                         const ComputeState& compute) {
  require_rate(rate_up, "uplink");
  require_rate(rate_down, "downlink");
  if (!(compute.alloc_cpu_hz > 0.0)) throw NoResourceError("no CPU allocated to the task");
  return 1.0 / rate_up + task.output_ratio / rate_down +
         task.intensity_cycles_per_bit / compute.alloc_cpu_hz;
}

}  // namespace alto::vec
