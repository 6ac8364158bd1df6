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
 * Experiment configuration shared by every CLI command.
 *
 * The file is JSON:
 *
 *   {
 *     "agent":       { AgentConfig keys },
 *     "env":         { dt, max_steps, k_nearest, ..., "geometry": {...},
 *                      "planner": {...} },
 *     "scenes":      { "split": "train" | "test", "scenarios": [...],
 *                      "speed": {"min", "max", "step"},
 *                      "distance": {"min", "max", "step"},
 *                      "file": "scenes.jsonl", "limit": 0 },
 *     "eval_scenes": { same as "scenes", default split "test" },
 *     "seeds":       [0, 1, 2],
 *     "out":         "runs/example",
 *     "analysis":    { "smoothing_window": 100,
 *                      "fim": { theta_samples, input_samples, gamma,
 *                               n_data, seed, "inputs": "rollout" | "uniform" } }
 *   }
 *
 * Every key is optional; unknown keys are a ConfigError.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "navq/agent/agent.hpp"
#include "navq/analysis/curves.hpp"
#include "navq/analysis/fim.hpp"
#include "navq/env/scene.hpp"
#include "navq/env/world.hpp"

namespace navq::cli {

struct Range {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;
};

struct ScenesConfig {
    ScenesConfig() = default;
    explicit ScenesConfig(env::Split s) : split(s) {}

    env::Split split = env::Split::Train;
    std::optional<std::vector<int>> scenarios;
    std::optional<Range> speed;
    std::optional<Range> distance;
    /// JSON-lines scene list; replaces the grid when set.
    std::string file;
    /// Keep only the first `limit` scenes (0 keeps all).
    int limit = 0;
};

enum class FimInputs { Rollout, Uniform };

struct AnalysisConfig {
    int smoothing_window = analysis::kDefaultSmoothingWindow;
    analysis::FimConfig fim;
    FimInputs fim_inputs = FimInputs::Rollout;
};

struct RunConfig {
    agent::AgentConfig agent;
    env::EnvConfig env;
    ScenesConfig scenes;
    ScenesConfig eval_scenes{env::Split::Test};
    std::vector<std::uint64_t> seeds{0};
    std::string out = "runs/default";
    AnalysisConfig analysis;

    void validate() const;
};

RunConfig run_config_from_json(const nlohmann::json &j);
nlohmann::json to_json(const RunConfig &c);
/// InputError if unreadable, ConfigError if not valid JSON or invalid.
RunConfig load_run_config(const std::string &path);

/// Command-line overrides applied on top of the file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> gradient_mode;
    /// Comma list: "none", "gate", "gate=<scale>", "depol=<p>",
    /// "trajectories=<n>", "placement=per_sublayer|per_gate".
    std::optional<std::string> noise;
    std::optional<int> episodes;
    std::optional<std::string> critic;
};

void apply_overrides(RunConfig &cfg, const Overrides &o);
void apply_noise_spec(qsim::NoiseSpec &noise, const std::string &spec);

/// Scene list described by `s`; ConfigError if it comes out empty.
std::vector<env::Scene> build_scenes(const ScenesConfig &s, const env::RoadGeometry &geo);

} // namespace navq::cli
