// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "alto/results_io.hpp"

#include <charconv>
#include <string_view>

#include <fmt/format.h>

#include "alto/errors.hpp"

namespace alto {
namespace {

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* name) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError(fmt::format("results.csv line {}: bad {} '{}'", line, name, text));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", r.scenario, r.policy, r.seed, r.t,
                       format_double(r.cum_regret), format_double(r.cum_avg_delay), r.chosen_arm,
                       format_double(r.x_t));
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw InputError("results.csv: missing or unexpected header");
  }
  std::vector<ResultRow> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 8) {
      throw InputError(fmt::format("results.csv line {}: expected 8 fields, got {}", number,
                                   fields.size()));
    }
    ResultRow row;
    row.scenario = std::string(fields[0]);
    row.policy = std::string(fields[1]);
    row.seed = parse_field<std::uint64_t>(fields[2], number, "seed");
    row.t = parse_field<Period>(fields[3], number, "t");
    row.cum_regret = parse_field<double>(fields[4], number, "cum_regret");
    row.cum_avg_delay = parse_field<double>(fields[5], number, "cum_avg_delay");
    row.chosen_arm = parse_field<ArmId>(fields[6], number, "chosen_arm");
    row.x_t = parse_field<double>(fields[7], number, "x_t");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace alto
