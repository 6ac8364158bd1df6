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
#include "navq/analysis/curves.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "navq/error.hpp"

namespace navq::analysis {

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double pstd_of(std::span<const double> v, double mean) {
    double s = 0.0;
    for (double x : v) {
        s += (x - mean) * (x - mean);
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

} // namespace

std::vector<double> smooth_curve(std::span<const double> returns, int window) {
    require<UsageError>(window >= 1, "smooth_curve: window must be >= 1");
    const auto w = static_cast<std::size_t>(window);
    std::vector<double> out(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) {
        const std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
        double s = 0.0;
        for (std::size_t j = lo; j <= i; ++j) {
            s += returns[j];
        }
        out[i] = s / static_cast<double>(i + 1 - lo);
    }
    return out;
}

double auc(std::span<const double> curve) {
    require<UsageError>(curve.size() >= 2, "auc: need at least two points");
    double s = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        s += 0.5 * (curve[i - 1] + curve[i]);
    }
    return s;
}

double window_mean(std::span<const double> curve, std::size_t begin, std::size_t count) {
    require<UsageError>(count > 0 && begin + count <= curve.size(),
                        "window_mean: window outside the curve");
    return mean_of(curve.subspan(begin, count));
}

CurveStats aggregate_runs(const std::vector<std::vector<double>> &runs, int window) {
    require<UsageError>(!runs.empty(), "aggregate_runs: no runs");
    CurveStats s;
    s.length = runs.front().size();
    for (const auto &r : runs) {
        s.truncated = s.truncated || r.size() != s.length;
        s.length = std::min(s.length, r.size());
    }
    require<UsageError>(s.length >= 2, "aggregate_runs: runs need at least two episodes");

    std::vector<std::vector<double>> smooth;
    for (const auto &r : runs) {
        smooth.push_back(smooth_curve(std::span(r).first(s.length), window));
        s.run_auc.push_back(auc(smooth.back()));
    }
    std::vector<double> col(runs.size());
    for (std::size_t e = 0; e < s.length; ++e) {
        for (std::size_t k = 0; k < runs.size(); ++k) {
            col[k] = smooth[k][e];
        }
        const double m = mean_of(col);
        s.mean.push_back(m);
        s.std.push_back(pstd_of(col, m));
        s.min.push_back(*std::min_element(col.begin(), col.end()));
        s.max.push_back(*std::max_element(col.begin(), col.end()));
    }
    s.auc_mean = mean_of(s.run_auc);
    s.auc_std = pstd_of(s.run_auc, s.auc_mean);
    return s;
}

void write_curve_stats_csv(std::ostream &os, const CurveStats &s) {
    os << "episode,mean,std,min,max\n";
    for (std::size_t e = 0; e < s.length; ++e) {
        os << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", e, s.mean[e], s.std[e],
                          s.min[e], s.max[e]);
    }
}

void write_auc_csv(std::ostream &os, const CurveStats &s) {
    os << "run,auc\n";
    for (std::size_t k = 0; k < s.run_auc.size(); ++k) {
        os << fmt::format("{},{:.17g}\n", k, s.run_auc[k]);
    }
    os << fmt::format("mean,{:.17g}\nstd,{:.17g}\n", s.auc_mean, s.auc_std);
}

} // namespace navq::analysis
