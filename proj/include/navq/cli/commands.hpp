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
 * The navq commands as library functions. Each returns a process exit code:
 * 0 on success, 2 for configuration or input errors, 3 for runtime failures.
 * Diagnostics go to `err`.
 *
 * Artifacts (all CSV numbers printed with 17 significant digits):
 *
 *   train    <out>/manifest.json
 *            <out>/seed_<s>/curve.csv        episode,return,smoothed_return,
 *                                            entropy,steps,outcome
 *            <out>/seed_<s>/checkpoint.json
 *   eval     <out>/metrics.json
 *            <out>/outcomes.csv              scene_id,scenario_id,outcome,steps,
 *                                            time_s,near_miss,return
 *            <out>/manifest.json
 *   analyze  <out>/curve_stats.csv          episode,mean,std,min,max
 *            <out>/auc.csv                  run,auc (+ mean, std rows)
 *            <out>/fim_report.json, <out>/eigenspectrum.csv   (with a checkpoint)
 *            <out>/manifest.json
 *   scenes   JSON-lines scene list
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "navq/agent/a2c.hpp"
#include "navq/cli/config.hpp"

namespace navq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct TrainArgs {
    std::string config_path; ///< empty: defaults
    Overrides overrides;
};

struct EvalArgs {
    std::string checkpoint;
    std::string config_path; ///< env and eval_scenes; empty: defaults
    std::optional<std::string> split;
    std::optional<int> limit;
    std::string out = "eval";
};

struct AnalyzeArgs {
    /// Train output directories (with seed_*/curve.csv) or curve CSV files.
    std::vector<std::string> runs;
    std::string checkpoint;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out = "analysis";
};

struct ScenesArgs {
    std::string config_path;
    std::optional<std::string> split;
    std::string out; ///< empty: write to `out` stream
};

int cmd_train(const TrainArgs &args, std::ostream &log, std::ostream &err);
int cmd_eval(const EvalArgs &args, std::ostream &log, std::ostream &err);
int cmd_analyze(const AnalyzeArgs &args, std::ostream &log, std::ostream &err);
int cmd_scenes(const ScenesArgs &args, std::ostream &out, std::ostream &err);

/// Header "episode,return,smoothed_return,entropy,steps,outcome".
void write_run_csv(std::ostream &os, const agent::RunRecord &record, int window);
/// The "return" column of a curve CSV; InputError on a malformed file.
std::vector<double> read_curve_returns(const std::string &path);

} // namespace navq::cli
