// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "alto/experiment.hpp"

namespace alto {

inline constexpr const char* kResultsHeader =
    "scenario,policy,seed,t,cum_regret,cum_avg_delay,chosen_arm,x_t";

// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);
// Throws InputError on a malformed header or row.
std::vector<ResultRow> read_results_csv(std::istream& in);

}  // namespace alto
