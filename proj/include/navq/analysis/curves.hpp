// Copyright 2026 The navq Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Return-curve smoothing, area under the curve, and aggregation across
 * seeded runs.
 */
#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace navq::analysis {

inline constexpr int kDefaultSmoothingWindow = 100;

/// Trailing moving average; the first window-1 points average over what is
/// available. UsageError if window < 1.
std::vector<double> smooth_curve(std::span<const double> returns,
                                 int window = kDefaultSmoothingWindow);

/// Trapezoidal integral with unit spacing; UsageError on fewer than two points.
double auc(std::span<const double> curve);

/// Mean of curve[begin, begin + count).
double window_mean(std::span<const double> curve, std::size_t begin, std::size_t count);

struct CurveStats {
    /// Per-episode statistics across runs of the smoothed curves.
    std::vector<double> mean, std, min, max;
    /// AUC of each run's smoothed curve.
    std::vector<double> run_auc;
    double auc_mean = 0.0;
    double auc_std = 0.0;
    std::size_t length = 0;
    /// Runs had different lengths and were cut to the shortest.
    bool truncated = false;
};

/// Smooths each run with `window`, truncates to the shortest run and
/// aggregates. Standard deviations are population (divide by the number
/// of runs). UsageError on an empty list or runs shorter than two points.
CurveStats aggregate_runs(const std::vector<std::vector<double>> &runs,
                          int window = kDefaultSmoothingWindow);

/// "episode,mean,std,min,max"
void write_curve_stats_csv(std::ostream &os, const CurveStats &s);
/// "run,auc" rows then "mean" and "std" rows.
void write_auc_csv(std::ostream &os, const CurveStats &s);

} // namespace navq::analysis
