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
#include "navq/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "navq/agent/evaluate.hpp"
#include "navq/analysis/curves.hpp"
#include "navq/analysis/fim.hpp"
#include "navq/error.hpp"
#include "navq/version.hpp"

namespace navq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

json versions() {
    return {{"navq", kVersion},
            {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                                  EIGEN_MINOR_VERSION)},
            {"compiler", __VERSION__},
#ifdef _OPENMP
            {"openmp", _OPENMP},
#endif
            {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                          NLOHMANN_JSON_VERSION_MINOR,
                                          NLOHMANN_JSON_VERSION_PATCH)}};
}

void write_json(const fs::path &p, const json &j) {
    std::ofstream out(p);
    require<InputError>(static_cast<bool>(out), "cannot write '" + p.string() + "'");
    out << j.dump(2) << '\n';
}

json read_json(const std::string &path, const char *what) {
    std::ifstream in(path);
    require<InputError>(static_cast<bool>(in), std::string("cannot read ") + what + " '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw InputError(std::string(what) + " '" + path + "' is not valid JSON: " + e.what());
    }
}

void make_dir(const fs::path &p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    require<InputError>(!ec, "cannot create directory '" + p.string() + "': " + ec.message());
}

RunConfig config_or_default(const std::string &path) {
    return path.empty() ? RunConfig{} : load_run_config(path);
}

// Runs `body`, mapping exceptions to exit codes.
template <class F>
int guarded(std::ostream &err, const char *cmd, F &&body) {
    try {
        return body();
    } catch (const ConfigError &e) {
        err << "navq " << cmd << ": configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InputError &e) {
        err << "navq " << cmd << ": input error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        err << "navq " << cmd << ": " << e.what() << '\n';
        return kExitRuntime;
    }
}

env::Split parse_split(const std::string &s) {
    require(s == "train" || s == "test", "unknown split '" + s + "' (expected train or test)");
    return s == "train" ? env::Split::Train : env::Split::Test;
}

std::vector<fs::path> curve_files(const std::string &input) {
    const fs::path p(input);
    require<InputError>(fs::exists(p), "run '" + input + "' does not exist");
    if (fs::is_regular_file(p)) {
        return {p};
    }
    if (fs::exists(p / "curve.csv")) {
        return {p / "curve.csv"};
    }
    std::vector<fs::path> out;
    for (const auto &entry : fs::directory_iterator(p)) {
        if (entry.is_directory() && entry.path().filename().string().rfind("seed_", 0) == 0 &&
            fs::exists(entry.path() / "curve.csv")) {
            out.push_back(entry.path() / "curve.csv");
        }
    }
    std::sort(out.begin(), out.end());
    require<InputError>(!out.empty(), "no curve.csv found under '" + input + "'");
    return out;
}

} // namespace

void write_run_csv(std::ostream &os, const agent::RunRecord &record, int window) {
    const auto returns = record.returns();
    const auto smooth = analysis::smooth_curve(returns, window);
    os << "episode,return,smoothed_return,entropy,steps,outcome\n";
    for (std::size_t i = 0; i < record.episodes.size(); ++i) {
        const auto &e = record.episodes[i];
        os << fmt::format("{},{:.17g},{:.17g},{:.17g},{},{}\n", e.episode, e.ret, smooth[i],
                          e.entropy, e.steps, env::to_string(e.outcome));
    }
}

std::vector<double> read_curve_returns(const std::string &path) {
    std::ifstream in(path);
    require<InputError>(static_cast<bool>(in), "cannot read curve '" + path + "'");
    std::string line;
    require<InputError>(static_cast<bool>(std::getline(in, line)), "curve '" + path + "' is empty");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            header.push_back(cell);
        }
    }
    const auto it = std::find(header.begin(), header.end(), "return");
    require<InputError>(it != header.end(), "curve '" + path + "' has no 'return' column");
    const auto col = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::size_t k = 0;
        bool found = false;
        while (std::getline(ss, cell, ',')) {
            if (k++ == col) {
                try {
                    out.push_back(std::stod(cell));
                } catch (const std::exception &) {
                    throw InputError(fmt::format("{}:{}: bad return value '{}'", path, lineno, cell));
                }
                found = true;
                break;
            }
        }
        require<InputError>(found, fmt::format("{}:{}: missing return column", path, lineno));
    }
    return out;
}

int cmd_train(const TrainArgs &args, std::ostream &log, std::ostream &err) {
    RunConfig cfg;
    const int rc = guarded(err, "train", [&] {
        cfg = config_or_default(args.config_path);
        apply_overrides(cfg, args.overrides);
        return kExitOk;
    });
    if (rc != kExitOk) {
        return rc;
    }
    return guarded(err, "train", [&] {
        const auto scenes = build_scenes(cfg.scenes, cfg.env.geometry);
        const fs::path out(cfg.out);
        make_dir(out);

        const int obs_dim = static_cast<int>(env::Observation::flat_size(cfg.env.k_nearest));
        const agent::Agent probe(cfg.agent, obs_dim);
        json manifest = {{"command", "train"},
                         {"config", to_json(cfg)},
                         {"seeds", cfg.seeds},
                         {"scenes", scenes.size()},
                         {"param_counts",
                          {{"critic", probe.critic().param_count()},
                           {"trunk", probe.trunk_param_count()},
                           {"total", probe.params().total_size()}}},
                         {"critic", probe.critic().describe()},
                         {"versions", versions()},
                         {"runs", json::array()}};

        const auto t0 = Clock::now();
        int status = kExitOk;
        for (const auto seed : cfg.seeds) {
            auto acfg = cfg.agent;
            acfg.seed = seed;
            const fs::path dir = out / fmt::format("seed_{}", seed);
            make_dir(dir);
            agent::RunRecord partial;
            json run = {{"seed", seed}, {"curve", (dir / "curve.csv").string()}};
            const auto ts = Clock::now();
            try {
                auto res = agent::train_run(acfg, cfg.env, scenes, [&](const auto &rec) {
                    partial.episodes.push_back(rec);
                });
                write_json(dir / "checkpoint.json", res.agent->checkpoint());
                run["checkpoint"] = (dir / "checkpoint.json").string();
                run["status"] = "complete";
            } catch (const std::exception &e) {
                run["status"] = "partial";
                run["error"] = e.what();
                err << "navq train: seed " << seed << " failed after " << partial.episodes.size()
                    << " episodes: " << e.what() << '\n';
                status = kExitRuntime;
            }
            {
                std::ofstream csv(dir / "curve.csv");
                require<InputError>(static_cast<bool>(csv), "cannot write curve CSV");
                write_run_csv(csv, partial, cfg.analysis.smoothing_window);
            }
            run["episodes_completed"] = partial.episodes.size();
            run["wall_clock_s"] = seconds_since(ts);
            manifest["runs"].push_back(run);
            log << fmt::format("seed {}: {} episodes, mean return {:.3f}\n", seed,
                               partial.episodes.size(),
                               partial.episodes.empty()
                                   ? 0.0
                                   : analysis::window_mean(partial.returns(), 0,
                                                           partial.episodes.size()));
            if (status != kExitOk) {
                break;
            }
        }
        manifest["status"] = status == kExitOk ? "complete" : "partial";
        manifest["wall_clock_s"] = seconds_since(t0);
        write_json(out / "manifest.json", manifest);
        return status;
    });
}

int cmd_eval(const EvalArgs &args, std::ostream &log, std::ostream &err) {
    return guarded(err, "eval", [&] {
        RunConfig cfg = config_or_default(args.config_path);
        const auto agent = agent::Agent::from_checkpoint(read_json(args.checkpoint, "checkpoint"));
        require(static_cast<std::size_t>(agent->obs_dim()) ==
                    env::Observation::flat_size(cfg.env.k_nearest),
                "checkpoint observation size does not match env.k_nearest");
        if (args.split) {
            cfg.eval_scenes = ScenesConfig{parse_split(*args.split)};
        }
        if (args.limit) {
            require(*args.limit >= 0, "--limit must be >= 0");
            cfg.eval_scenes.limit = *args.limit;
        }
        const auto scenes = build_scenes(cfg.eval_scenes, cfg.env.geometry);
        const fs::path out(args.out);
        make_dir(out);

        const auto t0 = Clock::now();
        const auto res = agent::evaluate_agent(*agent, scenes, cfg.env);
        json metrics = agent::to_json(res.metrics);
        write_json(out / "metrics.json", metrics);
        {
            std::ofstream csv(out / "outcomes.csv");
            require<InputError>(static_cast<bool>(csv), "cannot write outcomes CSV");
            csv << "scene_id,scenario_id,outcome,steps,time_s,near_miss,return\n";
            for (const auto &o : res.outcomes) {
                csv << fmt::format("{},{},{},{},{:.17g},{},{:.17g}\n", o.scene_id, o.scenario_id,
                                   env::to_string(o.outcome), o.steps, o.time_s,
                                   o.near_miss ? 1 : 0, o.ret);
            }
        }
        write_json(out / "manifest.json", {{"command", "eval"},
                                           {"checkpoint", args.checkpoint},
                                           {"config", to_json(cfg)},
                                           {"scenes", scenes.size()},
                                           {"versions", versions()},
                                           {"wall_clock_s", seconds_since(t0)}});
        log << fmt::format("{} scenes: crash {:.2f}%, near-miss {:.2f}%, SI {}/{}\n",
                           scenes.size(), res.metrics.crash_rate, res.metrics.near_miss_rate,
                           res.metrics.safety_index, res.metrics.scenarios);
        return kExitOk;
    });
}

int cmd_analyze(const AnalyzeArgs &args, std::ostream &log, std::ostream &err) {
    return guarded(err, "analyze", [&] {
        RunConfig cfg = config_or_default(args.config_path);
        if (args.seed) {
            cfg.analysis.fim.seed = *args.seed;
        }
        require(!args.runs.empty() || !args.checkpoint.empty(),
                "analyze needs --run and/or --checkpoint");
        const fs::path out(args.out);
        make_dir(out);
        const auto t0 = Clock::now();
        json manifest = {{"command", "analyze"},
                         {"config", to_json(cfg)},
                         {"versions", versions()},
                         {"warnings", json::array()}};

        if (!args.runs.empty()) {
            std::vector<std::string> files;
            std::vector<std::vector<double>> runs;
            for (const auto &r : args.runs) {
                for (const auto &f : curve_files(r)) {
                    files.push_back(f.string());
                    runs.push_back(read_curve_returns(f.string()));
                }
            }
            const auto stats = analysis::aggregate_runs(runs, cfg.analysis.smoothing_window);
            std::ofstream a(out / "curve_stats.csv");
            analysis::write_curve_stats_csv(a, stats);
            std::ofstream b(out / "auc.csv");
            analysis::write_auc_csv(b, stats);
            manifest["curves"] = files;
            manifest["episodes"] = stats.length;
            manifest["auc_mean"] = stats.auc_mean;
            manifest["auc_std"] = stats.auc_std;
            if (stats.truncated) {
                manifest["warnings"].push_back(
                    fmt::format("runs have different lengths; truncated to {}", stats.length));
            }
            log << fmt::format("{} runs, {} episodes: AUC {:.3f} +/- {:.3f}\n", runs.size(),
                               stats.length, stats.auc_mean, stats.auc_std);
        }

        if (!args.checkpoint.empty()) {
            auto agent = agent::Agent::from_checkpoint(read_json(args.checkpoint, "checkpoint"));
            auto &critic = agent->critic();
            const auto &fc = cfg.analysis.fim;
            std::vector<analysis::Vec> inputs;
            if (cfg.analysis.fim_inputs == FimInputs::Uniform) {
                inputs = analysis::uniform_inputs(critic.input_dim(), fc.input_samples,
                                                  substream_seed(fc.seed, "fim-inputs"));
            } else {
                require(static_cast<std::size_t>(agent->obs_dim()) ==
                            env::Observation::flat_size(cfg.env.k_nearest),
                        "checkpoint observation size does not match env.k_nearest");
                inputs = analysis::collect_hidden_states(
                    *agent, build_scenes(cfg.scenes, cfg.env.geometry), cfg.env,
                    fc.input_samples, substream_seed(fc.seed, "fim-inputs"));
            }
            const auto rep = analysis::fim_report(critic, inputs, fc);
            write_json(out / "fim_report.json", analysis::to_json(rep));
            std::ofstream csv(out / "eigenspectrum.csv");
            analysis::write_eigenspectrum_csv(csv, rep.eigenvalues);
            manifest["checkpoint"] = args.checkpoint;
            log << fmt::format("{} critic: d = {}, ED = {:.4f}, normalized {:.4f}\n", rep.model,
                               rep.d, rep.ed.ed, rep.ed.normalized);
        }
        manifest["wall_clock_s"] = seconds_since(t0);
        write_json(out / "manifest.json", manifest);
        return kExitOk;
    });
}

int cmd_scenes(const ScenesArgs &args, std::ostream &out, std::ostream &err) {
    return guarded(err, "scenes", [&] {
        RunConfig cfg = config_or_default(args.config_path);
        if (args.split) {
            cfg.scenes = ScenesConfig{parse_split(*args.split)};
        }
        const auto scenes = build_scenes(cfg.scenes, cfg.env.geometry);
        if (args.out.empty()) {
            env::write_jsonl(out, scenes);
        } else {
            std::ofstream f(args.out);
            require<InputError>(static_cast<bool>(f), "cannot write '" + args.out + "'");
            env::write_jsonl(f, scenes);
        }
        return kExitOk;
    });
}

} // namespace navq::cli
