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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include <nlohmann/json.hpp>

#include "navq/cli/commands.hpp"
#include "navq/cli/config.hpp"
#include "navq/error.hpp"
#include "support/temp_dir.hpp"

using namespace navq;
using namespace navq::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json smoke_config(const fs::path &out) {
    return {{"agent",
             {{"critic", "quantum"},
              {"quantum", {{"n_qubits", 2}, {"layers", 1}}},
              {"model", {{"lstm_hidden", 6}}},
              {"episodes", 2}}},
            {"env", {{"max_steps", 40}}},
            {"scenes",
             {{"scenarios", {1}},
              {"speed", {{"min", 1.0}, {"max", 1.5}, {"step", 0.5}}},
              {"distance", {{"min", 0.0}, {"max", 4.0}, {"step", 4.0}}}}},
            {"eval_scenes", {{"scenarios", {1, 3}}, {"limit", 1}}},
            {"seeds", {3}},
            {"out", out.string()}};
}

std::string write_config(const fs::path &dir, const json &j, const char *name = "cfg.json") {
    const auto p = dir / name;
    std::ofstream(p) << j.dump();
    return p.string();
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const fs::path &p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    std::string l;
    while (std::getline(in, l)) {
        out.push_back(l);
    }
    return out;
}

json load(const fs::path &p) { return json::parse(slurp(p)); }

} // namespace

TEST_CASE("run config json") {
    RunConfig c;
    c.seeds = {4, 5};
    c.env.max_steps = 77;
    c.env.geometry.lane_width = 3.25;
    c.scenes.scenarios = std::vector<int>{2, 7};
    c.scenes.speed = Range{0.5, 1.0, 0.25};
    c.analysis.fim.theta_samples = 6;
    c.analysis.fim_inputs = FimInputs::Uniform;
    const auto j = to_json(c);
    CHECK(to_json(run_config_from_json(j)) == j);

    for (const char *path : {"/bogus", "/env/bogus", "/env/geometry/bogus", "/scenes/bogus",
                             "/scenes/speed/bogus", "/analysis/bogus", "/analysis/fim/bogus",
                             "/agent/bogus", "/agent/model/bogus"}) {
        auto bad = j;
        bad[json::json_pointer(path)] = 1;
        CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    }
    auto bad = j;
    bad["seeds"] = json::array();
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    bad = j;
    bad["env"]["max_steps"] = "many";
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    bad = j;
    bad["scenes"]["split"] = "validation";
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
}

TEST_CASE("overrides") {
    RunConfig c;
    Overrides o;
    o.seed = 9;
    o.out = "elsewhere";
    o.gradient_mode = "parameter-shift";
    o.noise = "gate,depol=0.2,trajectories=4,placement=per_gate";
    o.episodes = 12;
    o.critic = "classical";
    apply_overrides(c, o);
    CHECK(c.seeds == std::vector<std::uint64_t>{9});
    CHECK(c.out == "elsewhere");
    CHECK(c.agent.quantum.gradient == agent::GradientMode::ParamShift);
    CHECK(c.agent.quantum.noise.gate_error_scale == 0.01);
    CHECK(c.agent.quantum.noise.depolarizing_p == 0.2);
    CHECK(c.agent.quantum.noise.trajectories == 4);
    CHECK(c.agent.quantum.noise.placement == qsim::DepolarizingPlacement::PerGate);
    CHECK(c.agent.episodes == 12);
    CHECK(c.agent.critic == agent::CriticKind::Classical);

    apply_noise_spec(c.agent.quantum.noise, "none");
    CHECK_FALSE(c.agent.quantum.noise.enabled());
    for (const char *bad : {"depol", "depol=x", "depol=1.5", "loud", "placement=everywhere"}) {
        qsim::NoiseSpec n;
        CHECK_THROWS_AS(apply_noise_spec(n, bad), ConfigError);
    }
    Overrides bad;
    bad.episodes = -1;
    CHECK_THROWS_AS(apply_overrides(c, bad), ConfigError);
}

TEST_CASE("build_scenes") {
    ScenesConfig s;
    CHECK(build_scenes(s, {}).size() == 3690);
    s.limit = 10;
    CHECK(build_scenes(s, {}).size() == 10);
    s = ScenesConfig{};
    s.scenarios = std::vector<int>{1};
    s.speed = Range{0.6, 2.0, 0.35};
    s.distance = Range{0.0, 36.0, 4.0};
    CHECK(build_scenes(s, {}).size() == 50);
    s.scenarios = std::vector<int>{9};
    CHECK_THROWS_AS(build_scenes(s, {}), ConfigError);
    s = ScenesConfig{};
    s.file = "/nonexistent/scenes.jsonl";
    CHECK_THROWS_AS(build_scenes(s, {}), InputError);
}

TEST_CASE("cmd_train") {
    test::TempDir tmp;
    std::ostringstream log, err;
    const auto cfg = write_config(tmp.path(), smoke_config(tmp.path() / "a"));

    CHECK(cmd_train({cfg, {}}, log, err) == kExitOk);
    const auto csv = lines(tmp.path() / "a" / "seed_3" / "curve.csv");
    REQUIRE(csv.size() == 3);
    CHECK(csv[0] == "episode,return,smoothed_return,entropy,steps,outcome");
    CHECK(fs::exists(tmp.path() / "a" / "seed_3" / "checkpoint.json"));
    const auto m = load(tmp.path() / "a" / "manifest.json");
    CHECK(m.at("status") == "complete");
    CHECK(m.at("param_counts").at("critic") == 7);
    CHECK(m.at("config") == to_json(load_run_config(cfg)));

    SUBCASE("same config and seed give identical curves") {
        Overrides o;
        o.out = (tmp.path() / "b").string();
        CHECK(cmd_train({cfg, o}, log, err) == kExitOk);
        CHECK(slurp(tmp.path() / "a" / "seed_3" / "curve.csv") ==
              slurp(tmp.path() / "b" / "seed_3" / "curve.csv"));
    }
    SUBCASE("curve round trip") {
        const auto r = read_curve_returns((tmp.path() / "a" / "seed_3" / "curve.csv").string());
        CHECK(r.size() == 2);
    }
    SUBCASE("manifest reports the 4-qubit, 2-layer count") {
        auto j = smoke_config(tmp.path() / "q");
        j["agent"]["quantum"] = {{"n_qubits", 4}, {"layers", 2}};
        j["agent"]["model"] = {{"lstm_hidden", 32}};
        j["agent"]["episodes"] = 1;
        j["env"]["max_steps"] = 5;
        CHECK(cmd_train({write_config(tmp.path(), j, "q.json"), {}}, log, err) == kExitOk);
        CHECK(load(tmp.path() / "q" / "manifest.json").at("param_counts").at("critic") == 53);
    }
    SUBCASE("configuration errors exit with 2") {
        auto j = smoke_config(tmp.path() / "x");
        j["agent"]["episodez"] = 3;
        CHECK(cmd_train({write_config(tmp.path(), j, "x.json"), {}}, log, err) == kExitConfig);
        CHECK(cmd_train({(tmp.path() / "missing.json").string(), {}}, log, err) == kExitConfig);
        std::ofstream(tmp.path() / "broken.json") << "{";
        CHECK(cmd_train({(tmp.path() / "broken.json").string(), {}}, log, err) == kExitConfig);
        CHECK_FALSE(err.str().empty());
    }
}

TEST_CASE("cmd_eval") {
    test::TempDir tmp;
    std::ostringstream log, err;
    const auto cfg = write_config(tmp.path(), smoke_config(tmp.path() / "run"));
    REQUIRE(cmd_train({cfg, {}}, log, err) == kExitOk);
    const auto ckpt = (tmp.path() / "run" / "seed_3" / "checkpoint.json").string();

    EvalArgs a;
    a.checkpoint = ckpt;
    a.config_path = cfg;
    a.out = (tmp.path() / "e1").string();
    CHECK(cmd_eval(a, log, err) == kExitOk);
    CHECK(lines(tmp.path() / "e1" / "outcomes.csv").size() == 2);
    const auto m = load(tmp.path() / "e1" / "metrics.json");
    CHECK(m.at("safety_index").get<int>() >= 0);
    CHECK(m.at("safety_index").get<int>() <= m.at("scenarios").get<int>());

    a.out = (tmp.path() / "e2").string();
    CHECK(cmd_eval(a, log, err) == kExitOk);
    CHECK(slurp(tmp.path() / "e1" / "metrics.json") == slurp(tmp.path() / "e2" / "metrics.json"));

    a.checkpoint = (tmp.path() / "nope.json").string();
    CHECK(cmd_eval(a, log, err) != kExitOk);
    a.checkpoint = ckpt;
    a.split = "validation";
    CHECK(cmd_eval(a, log, err) == kExitConfig);
}

TEST_CASE("cmd_analyze") {
    test::TempDir tmp;
    std::ostringstream log, err;
    auto j = smoke_config(tmp.path() / "run");
    j["agent"]["episodes"] = 3;
    j["analysis"] = {{"smoothing_window", 2},
                     {"fim", {{"theta_samples", 3}, {"input_samples", 12}}}};
    const auto cfg = write_config(tmp.path(), j);
    REQUIRE(cmd_train({cfg, {}}, log, err) == kExitOk);

    AnalyzeArgs a;
    a.runs = {(tmp.path() / "run").string()};
    a.checkpoint = (tmp.path() / "run" / "seed_3" / "checkpoint.json").string();
    a.config_path = cfg;
    a.out = (tmp.path() / "an").string();
    CHECK(cmd_analyze(a, log, err) == kExitOk);
    const auto auc = lines(tmp.path() / "an" / "auc.csv");
    REQUIRE(auc.size() == 4);
    CHECK(auc[1].rfind("0,", 0) == 0);
    CHECK(lines(tmp.path() / "an" / "curve_stats.csv").size() == 4);
    const auto rep = load(tmp.path() / "an" / "fim_report.json");
    CHECK(rep.at("d") == 7);
    CHECK(rep.at("effective_dimension").get<double>() > 0.0);
    CHECK(rep.at("effective_dimension").get<double>() <= 7.0);
    CHECK(lines(tmp.path() / "an" / "eigenspectrum.csv").size() == 8);

    SUBCASE("mixed lengths are truncated with a warning") {
        std::ofstream(tmp.path() / "short.csv") << "episode,return\n0,1\n1,2\n";
        a.runs.push_back((tmp.path() / "short.csv").string());
        a.checkpoint.clear();
        CHECK(cmd_analyze(a, log, err) == kExitOk);
        const auto m = load(tmp.path() / "an" / "manifest.json");
        CHECK(m.at("warnings").size() == 1);
        CHECK(m.at("episodes") == 2);
    }
    SUBCASE("bad inputs") {
        AnalyzeArgs b;
        b.out = a.out;
        CHECK(cmd_analyze(b, log, err) == kExitConfig);
        b.runs = {(tmp.path() / "absent").string()};
        CHECK(cmd_analyze(b, log, err) == kExitConfig);
        std::ofstream(tmp.path() / "bad.csv") << "episode,return\n0,abc\n";
        b.runs = {(tmp.path() / "bad.csv").string()};
        CHECK(cmd_analyze(b, log, err) == kExitConfig);
    }
}

TEST_CASE("cmd_scenes") {
    std::ostringstream out, err;
    ScenesArgs a;
    a.split = "test";
    CHECK(cmd_scenes(a, out, err) == kExitOk);
    std::istringstream in(out.str());
    CHECK(env::read_jsonl(in).size() == 8 * 27 * 45);
    a.split = "dev";
    CHECK(cmd_scenes(a, out, err) == kExitConfig);
}
