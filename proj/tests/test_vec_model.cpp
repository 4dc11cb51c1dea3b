// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "alto/errors.hpp"
#include "alto/vec_model.hpp"

using namespace alto;
using namespace alto::vec;

namespace {

// Independent scalar oracle: W log2(1 + P h / (N + I)).
double shannon(double w, double p, double h, double n, double i) {
  return w * std::log(1.0 + p * h / (n + i)) / std::log(2.0);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("decibel conversion and default path loss") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(RadioParams{}.pathloss_const == doctest::Approx(std::pow(10.0, -1.78)).epsilon(1e-15));
}

TEST_CASE("pathloss gain") {
  const double a0 = std::pow(10.0, -1.78);
  CHECK(pathloss_gain(100.0, a0) == doctest::Approx(a0 / 1e4).epsilon(1e-14));
  CHECK(pathloss_gain(100.0, a0) == doctest::Approx(1.6596e-6).epsilon(1e-4));
  CHECK(pathloss_gain(1.0, a0) == a0);
  CHECK(pathloss_gain(200.0, a0) == doctest::Approx(4.149e-7).epsilon(1e-3));
  CHECK_THROWS_AS(pathloss_gain(0.0, a0), DomainError);
  CHECK_THROWS_AS(pathloss_gain(-3.0, a0), DomainError);
}

TEST_CASE("uplink and downlink rates") {
  RadioParams r;
  const double h100 = pathloss_gain(100.0, r.pathloss_const);
  const double up = uplink_rate(r, h100);
  CHECK(rel(up, shannon(1e7, 0.1, h100, 1e-13, 0.0)) < 1e-14);
  CHECK(up == doctest::Approx(2.066e8).epsilon(1e-3));
  CHECK(uplink_rate(r, 0.0) == 0.0);
  CHECK(downlink_rate(r, 0.0) == 0.0);
  CHECK(downlink_rate(r, h100) == up);

  RadioParams noisy = r;
  noisy.interference_up_watts = 9e-13;
  CHECK(uplink_rate(noisy, 1e-12) == doctest::Approx(1e7 * std::log2(1.1)).epsilon(1e-12));
  CHECK(uplink_rate(noisy, 1e-12) == doctest::Approx(1.375e6).epsilon(1e-3));

  const double h200 = pathloss_gain(200.0, r.pathloss_const);
  const double down = downlink_rate(r, h200);
  CHECK(rel(down, shannon(1e7, 0.1, h200, 1e-13, 0.0)) < 1e-14);
  CHECK(down == doctest::Approx(1.87e8).epsilon(3e-3));
  CHECK_THROWS_AS(uplink_rate(r, -1.0), DomainError);
}

TEST_CASE("component delays") {
  CHECK(upload_delay({1e6}, 2.066e8) == doctest::Approx(1e6 / 2.066e8));
  CHECK(upload_delay({1e6}, 2.066e8) == doctest::Approx(4.84e-3).epsilon(1e-3));
  CHECK(upload_delay({3e5}, 3e5) == 1.0);
  CHECK(upload_delay({2e5}, 1e6) == doctest::Approx(0.2));
  CHECK_THROWS_AS(upload_delay({1e6}, 0.0), UnreachableLinkError);

  CHECK(compute_delay({1e6}, {3e9, 1.5e9}) == doctest::Approx(2.0 / 3.0));
  CHECK(compute_delay({1e6}, {3e9, 1e9}) == 1.0);
  CHECK(compute_delay({2e5}, {3e9, 2e9}) == doctest::Approx(0.1));
  CHECK_THROWS_AS(compute_delay({1e6}, {3e9, 0.0}), NoResourceError);

  CHECK(download_delay({1e6, 0.0}, 5e7) == 0.0);
  CHECK(download_delay({4e6, 1.0}, 4e6) == 1.0);
  CHECK(download_delay({1e6, 0.1}, 1e8) == doctest::Approx(1e-3));
  CHECK_THROWS_AS(download_delay({1e6, 0.0}, 0.0), UnreachableLinkError);
}

TEST_CASE("sum and per-bit delay") {
  const Task t{1e6, 0.0, 1000.0};
  const ComputeState c{3e9, 1.5e9};
  CHECK(sum_delay(t, 2.066e8, 1e8, c) == doctest::Approx(1e6 / 2.066e8 + 2.0 / 3.0));
  CHECK(sum_delay(t, 2.066e8, 1e8, c) == doctest::Approx(0.6715).epsilon(1e-3));
  CHECK(sum_delay(t, 1e300, 1e300, {3e9, 1e9}) == doctest::Approx(1.0));
  CHECK(sum_delay({1e5, 1.0, 1000.0}, 1e6, 1e6, {3e9, 1e9}) == doctest::Approx(0.3));

  CHECK(bit_offload_delay(t, 2.066e8, 1e8, c) == doctest::Approx(1.0 / 2.066e8 + 1000.0 / 1.5e9));
  CHECK(bit_offload_delay(t, 2.066e8, 1e8, c) == doctest::Approx(6.715e-7).epsilon(1e-3));
  CHECK(bit_offload_delay(t, 1e300, 1e300, c) == doctest::Approx(1000.0 / 1.5e9));
  CHECK(bit_offload_delay({1.0, 1.0, 1000.0}, 1e8, 1e8, {3e9, 1e9}) ==
        doctest::Approx(1.02e-6).epsilon(1e-12));
}

TEST_CASE("validation") {
  RadioParams r;
  r.bandwidth_hz = 0.0;
  CHECK_THROWS_AS(r.validate(), DomainError);
  CHECK_THROWS_AS((Task{-1.0}).validate(), DomainError);
  CHECK_THROWS_AS((ComputeState{1e9, 2e9}).validate(), DomainError);
  CHECK_NOTHROW((ComputeState{2e9, 1e9}).validate());
}

TEST_CASE("property: sum delay equals input times per-bit delay") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(1.0, 1e7), ratio(0.0, 3.0), w(1.0, 1e4),
      dist(1.0, 500.0), f(1e8, 1e10);
  for (int i = 0; i < 10000; ++i) {
    RadioParams r;
    const Task task{x(rng), ratio(rng), w(rng)};
    const LinkState link = reciprocal_link(dist(rng), r);
    const double up = uplink_rate(r, link.channel_gain_up);
    const double down = downlink_rate(r, link.channel_gain_down);
    const ComputeState c{1e10, f(rng)};
    const double total = sum_delay(task, up, down, c);
    REQUIRE(rel(total, task.input_bits * bit_offload_delay(task, up, down, c)) <= 1e-12);
  }
}

TEST_CASE("property: delay grows with distance and shrinks with CPU") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(10.0, 199.0), f(0.6e9, 3.25e9), x(2e5, 1e6);
  const RadioParams r;
  for (int i = 0; i < 10000; ++i) {
    const Task task{x(rng), 0.1, 1000.0};
    const double d = dist(rng);
    const ComputeState c{6.5e9, f(rng)};
    const LinkState near = reciprocal_link(d, r), far = reciprocal_link(d + 1.0, r);
    const double base = sum_delay(task, uplink_rate(r, near.channel_gain_up),
                                  downlink_rate(r, near.channel_gain_down), c);
    REQUIRE(sum_delay(task, uplink_rate(r, far.channel_gain_up),
                      downlink_rate(r, far.channel_gain_down), c) > base);
    REQUIRE(sum_delay(task, uplink_rate(r, near.channel_gain_up),
                      downlink_rate(r, near.channel_gain_down), {6.5e9, c.alloc_cpu_hz * 1.1}) <
            base);
    REQUIRE(uplink_rate(r, far.channel_gain_up) < uplink_rate(r, near.channel_gain_up));
  }
}
