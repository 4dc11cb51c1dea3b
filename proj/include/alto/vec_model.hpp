// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Physical offloading-delay model for vehicle-to-vehicle task offloading.
//
// A task of x input bits is uploaded to a service vehicle over a Shannon-rate
// link, executed with an allocated CPU frequency, and its output (a fixed
// fraction of the input) is sent back. All quantities are SI: bits, Hz,
// watts, seconds, meters. Gains are linear, never dB.

#pragma once

namespace alto::vec {

// Converts a decibel figure to a linear power ratio.
double db_to_linear(double db);

struct RadioParams {
  double tx_power_watts = 0.1;
  double bandwidth_hz = 10e6;
  double noise_watts = 1e-13;
  // Linear gain at 1 m of the inverse-square law; -17.8 dB by default.
  double pathloss_const = 0.016595869074375606;
  double interference_up_watts = 0.0;
  double interference_down_watts = 0.0;

  // Throws DomainError when a field breaks its invariant.
  void validate() const;
};

struct Task {
  double input_bits = 0.0;
  // Output bits per input bit.
  double output_ratio = 0.0;
  double intensity_cycles_per_bit = 1000.0;

  double output_bits() const { return output_ratio * input_bits; }
  void validate() const;
};

struct LinkState {
  double distance_m = 0.0;
  double channel_gain_up = 0.0;
  double channel_gain_down = 0.0;
};

struct ComputeState {
  double max_cpu_hz = 0.0;
  double alloc_cpu_hz = 0.0;

  void validate() const;
};

// pathloss_const * distance^-2. Throws DomainError for distance <= 0.
double pathloss_gain(double distance_m, double pathloss_const);

// Builds a reciprocal link (same gain both ways) at the given distance.
LinkState reciprocal_link(double distance_m, const RadioParams& radio);

// W log2(1 + P h / (noise + interference)), in bits/s.
double uplink_rate(const RadioParams& radio, double gain_up);
double downlink_rate(const RadioParams& radio, double gain_down);

// Per-component delays in seconds. Zero rates throw UnreachableLinkError,
// zero CPU throws NoResourceError.
double upload_delay(const Task& task, double rate_up);
double compute_delay(const Task& task, const ComputeState& compute);
double download_delay(const Task& task, double rate_down);

double sum_delay(const Task& task, double rate_up, double rate_down,
                 const ComputeState& compute);

// Seconds needed per input bit: 1/r_up + ratio/r_down + intensity/f.
// sum_delay == input_bits * bit_offload_delay up to rounding.
double bit_offload_delay(const Task& task, double rate_up, double rate_down,
                         const ComputeState& compute);

}  // namespace alto::vec
