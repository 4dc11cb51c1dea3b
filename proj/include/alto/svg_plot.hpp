// SPDX-FileCopyrightText: Copyright (c) 2026 The alto-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Minimal line-chart SVG writer: one polyline per series plus a shaded
// +/- 1 std band.

#pragma once

#include <string>
#include <vector>

namespace alto {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stddev;  // may be empty
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

std::string render_svg(const PlotSpec& spec);

}  // namespace alto
