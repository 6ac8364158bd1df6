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
#include <iostream>

#include "CLI11.hpp"

#include "navq/cli/commands.hpp"
#include "navq/version.hpp"

int main(int argc, char **argv) {
    using namespace navq::cli;

    CLI::App app{"navq: quantum and classical critics for pedestrian-aware driving"};
    app.set_version_flag("--version", navq::kVersion);
    app.require_subcommand(1);

    TrainArgs train;
    auto *t = app.add_subcommand("train", "train one run per seed");
    t->add_option("--config", train.config_path, "JSON run config");
    t->add_option("--seed", train.overrides.seed, "single seed (replaces the seeds list)");
    t->add_option("--out", train.overrides.out, "output directory");
    t->add_option("--gradient-mode", train.overrides.gradient_mode,
                  "quantum critic gradient: backprop-sim | parameter-shift");
    t->add_option("--noise", train.overrides.noise,
                  "none | gate[=scale] | depol=p | trajectories=n | placement=..., comma separated");
    t->add_option("--episodes", train.overrides.episodes, "episodes per seed");
    t->add_option("--critic", train.overrides.critic, "quantum | classical");

    EvalArgs eval;
    auto *e = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
    e->add_option("checkpoint", eval.checkpoint, "checkpoint JSON")->required();
    e->add_option("--config", eval.config_path, "JSON run config (env, eval_scenes)");
    e->add_option("--split", eval.split, "train | test (overrides eval_scenes)");
    e->add_option("--limit", eval.limit, "evaluate only the first N scenes");
    e->add_option("--out", eval.out, "output directory");

    AnalyzeArgs analyze;
    auto *a = app.add_subcommand("analyze", "curve statistics and critic capacity");
    a->add_option("--run", analyze.runs, "train output directory or curve CSV (repeatable)");
    a->add_option("--checkpoint", analyze.checkpoint, "checkpoint for the Fisher analysis");
    a->add_option("--config", analyze.config_path, "JSON run config (analysis, env, scenes)");
    a->add_option("--seed", analyze.seed, "Fisher sampling seed");
    a->add_option("--out", analyze.out, "output directory");

    ScenesArgs scenes;
    auto *s = app.add_subcommand("scenes", "dump a scene grid as JSON lines");
    s->add_option("--config", scenes.config_path, "JSON run config (scenes)");
    s->add_option("--split", scenes.split, "train | test");
    s->add_option("--out", scenes.out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &err) {
        const int rc = app.exit(err);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (*t) {
        return cmd_train(train, std::cout, std::cerr);
    }
    if (*e) {
        return cmd_eval(eval, std::cout, std::cerr);
    }
    if (*a) {
        return cmd_analyze(analyze, std::cout, std::cerr);
    }
    return cmd_scenes(scenes, std::cout, std::cerr);
}
