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
#include "navq/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <variant>

#include <nlohmann/json.hpp>

#include "navq/error.hpp"

namespace navq::cli {

using nlohmann::json;

namespace {

// Named numeric fields of a struct, for table-driven (de)serialization.
template <class S>
using Field = std::pair<const char *, std::variant<double S::*, int S::*>>;

template <class S>
const std::vector<Field<S>> &fields();

template <>
const std::vector<Field<env::EnvConfig>> &fields() {
    using E = env::EnvConfig;
    static const std::vector<Field<E>> f = {
        {"dt", &E::dt},
        {"wheelbase", &E::wheelbase},
        {"car_length", &E::car_length},
        {"car_width", &E::car_width},
        {"ped_radius", &E::ped_radius},
        {"near_miss_margin", &E::near_miss_margin},
        {"hit_area_margin", &E::hit_area_margin},
        {"speed_step_kmh", &E::speed_step_kmh},
        {"speed_limit_kmh", &E::speed_limit_kmh},
        {"max_speed_kmh", &E::max_speed_kmh},
        {"max_steps", &E::max_steps},
        {"sensing_radius", &E::sensing_radius},
        {"k_nearest", &E::k_nearest},
        {"goal_tolerance", &E::goal_tolerance},
        {"goal_reward", &E::goal_reward},
        {"hit_penalty", &E::hit_penalty},
        {"impact_ref_kmh", &E::impact_ref_kmh},
        {"near_miss_penalty", &E::near_miss_penalty},
        {"over_speed_penalty", &E::over_speed_penalty},
        {"not_goal_scale", &E::not_goal_scale},
        {"braking_penalty", &E::braking_penalty},
        {"steer_penalty", &E::steer_penalty},
    };
    return f;
}

template <>
const std::vector<Field<env::RoadGeometry>> &fields() {
    using G = env::RoadGeometry;
    static const std::vector<Field<G>> f = {
        {"road_length", &G::road_length},
        {"lane_width", &G::lane_width},
        {"sidewalk_width", &G::sidewalk_width},
        {"margin", &G::margin},
        {"outer_band", &G::outer_band},
        {"resolution", &G::resolution},
        {"ped_base_offset", &G::ped_base_offset},
        {"parked_gap", &G::parked_gap},
        {"vehicle_length", &G::vehicle_length},
        {"vehicle_width", &G::vehicle_width},
        {"oncoming_offset", &G::oncoming_offset},
        {"oncoming_speed", &G::oncoming_speed},
        {"diagonal_shift", &G::diagonal_shift},
    };
    return f;
}

template <>
const std::vector<Field<env::PlannerConfig>> &fields() {
    using P = env::PlannerConfig;
    static const std::vector<Field<P>> f = {
        {"step_length", &P::step_length},
        {"substeps", &P::substeps},
        {"heading_bins", &P::heading_bins},
        {"xy_resolution", &P::xy_resolution},
        {"goal_tolerance", &P::goal_tolerance},
        {"heuristic_weight", &P::heuristic_weight},
        {"steer_penalty", &P::steer_penalty},
        {"max_expansions", &P::max_expansions},
        {"lookahead_min", &P::lookahead_min},
        {"lookahead_time", &P::lookahead_time},
    };
    return f;
}

template <>
const std::vector<Field<analysis::FimConfig>> &fields() {
    using F = analysis::FimConfig;
    static const std::vector<Field<F>> f = {
        {"theta_samples", &F::theta_samples},
        {"input_samples", &F::input_samples},
        {"gamma", &F::gamma},
        {"n_data", &F::n_data},
    };
    return f;
}

void reject_unknown(const json &j, std::set<std::string> allowed, const std::string &where) {
    require(j.is_object(), "'" + where + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        require(allowed.count(it.key()) != 0, "unknown key '" + it.key() + "' in '" + where + "'");
    }
}

template <class T>
T get_as(const json &j, const std::string &key) {
    try {
        return j.get<T>();
    } catch (const json::exception &e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

template <class S>
std::set<std::string> field_names(std::initializer_list<const char *> extra = {}) {
    std::set<std::string> out(extra.begin(), extra.end());
    for (const auto &[name, _] : fields<S>()) {
        out.insert(name);
    }
    return out;
}

template <class S>
void read_fields(const json &j, S &s) {
    for (const auto &[name, member] : fields<S>()) {
        if (!j.contains(name)) {
            continue;
        }
        std::visit(
            [&](auto m) {
                using T = std::remove_reference_t<decltype(s.*m)>;
                s.*m = get_as<T>(j.at(name), name);
            },
            member);
    }
}

template <class S>
json write_fields(const S &s) {
    json j = json::object();
    for (const auto &[name, member] : fields<S>()) {
        std::visit([&](auto m) { j[name] = s.*m; }, member);
    }
    return j;
}

const char *split_name(env::Split s) { return s == env::Split::Train ? "train" : "test"; }

env::Split split_from(const std::string &s) {
    if (s == "train") {
        return env::Split::Train;
    }
    if (s == "test") {
        return env::Split::Test;
    }
    throw ConfigError("unknown split '" + s + "' (expected train or test)");
}

Range range_from(const json &j, const std::string &where) {
    reject_unknown(j, {"min", "max", "step"}, where);
    Range r;
    if (j.contains("min")) r.min = get_as<double>(j.at("min"), where + ".min");
    if (j.contains("max")) r.max = get_as<double>(j.at("max"), where + ".max");
    if (j.contains("step")) r.step = get_as<double>(j.at("step"), where + ".step");
    return r;
}

ScenesConfig scenes_from(const json &j, env::Split default_split, const std::string &where) {
    reject_unknown(j, {"split", "scenarios", "speed", "distance", "file", "limit"}, where);
    ScenesConfig s;
    s.split = default_split;
    if (j.contains("split")) s.split = split_from(get_as<std::string>(j.at("split"), "split"));
    if (j.contains("scenarios")) {
        s.scenarios = get_as<std::vector<int>>(j.at("scenarios"), where + ".scenarios");
    }
    if (j.contains("speed")) s.speed = range_from(j.at("speed"), where + ".speed");
    if (j.contains("distance")) s.distance = range_from(j.at("distance"), where + ".distance");
    if (j.contains("file")) s.file = get_as<std::string>(j.at("file"), where + ".file");
    if (j.contains("limit")) s.limit = get_as<int>(j.at("limit"), where + ".limit");
    return s;
}

json to_json(const Range &r) { return {{"min", r.min}, {"max", r.max}, {"step", r.step}}; }

json to_json(const ScenesConfig &s) {
    json j = {{"split", split_name(s.split)}, {"limit", s.limit}};
    if (s.scenarios) j["scenarios"] = *s.scenarios;
    if (s.speed) j["speed"] = to_json(*s.speed);
    if (s.distance) j["distance"] = to_json(*s.distance);
    if (!s.file.empty()) j["file"] = s.file;
    return j;
}

} // namespace

void RunConfig::validate() const {
    agent.validate();
    env.validate();
    require(!seeds.empty(), "at least one seed is required");
    require(!out.empty(), "'out' must not be empty");
    for (const auto *s : {&scenes, &eval_scenes}) {
        require(s->limit >= 0, "scene limit must be >= 0");
    }
    require(analysis.smoothing_window >= 1, "smoothing_window must be >= 1");
    require(analysis.fim.theta_samples >= 2, "fim.theta_samples must be >= 2");
    require(analysis.fim.input_samples >= 1, "fim.input_samples must be >= 1");
}

RunConfig run_config_from_json(const json &j) {
    reject_unknown(j, {"agent", "env", "scenes", "eval_scenes", "seeds", "out", "analysis"},
                   "config");
    RunConfig c;
    if (j.contains("agent")) {
        c.agent = agent::agent_config_from_json(j.at("agent"));
    }
    if (j.contains("env")) {
        const auto &e = j.at("env");
        reject_unknown(e, field_names<env::EnvConfig>({"geometry", "planner"}), "env");
        read_fields(e, c.env);
        if (e.contains("geometry")) {
            reject_unknown(e.at("geometry"), field_names<env::RoadGeometry>(), "env.geometry");
            read_fields(e.at("geometry"), c.env.geometry);
        }
        if (e.contains("planner")) {
            reject_unknown(e.at("planner"), field_names<env::PlannerConfig>(), "env.planner");
            read_fields(e.at("planner"), c.env.planner);
        }
    }
    if (j.contains("scenes")) {
        c.scenes = scenes_from(j.at("scenes"), env::Split::Train, "scenes");
    }
    if (j.contains("eval_scenes")) {
        c.eval_scenes = scenes_from(j.at("eval_scenes"), env::Split::Test, "eval_scenes");
    }
    if (j.contains("seeds")) {
        c.seeds = get_as<std::vector<std::uint64_t>>(j.at("seeds"), "seeds");
    }
    if (j.contains("out")) {
        c.out = get_as<std::string>(j.at("out"), "out");
    }
    if (j.contains("analysis")) {
        const auto &a = j.at("analysis");
        reject_unknown(a, {"smoothing_window", "fim"}, "analysis");
        if (a.contains("smoothing_window")) {
            c.analysis.smoothing_window = get_as<int>(a.at("smoothing_window"), "smoothing_window");
        }
        if (a.contains("fim")) {
            const auto &f = a.at("fim");
            reject_unknown(f, field_names<analysis::FimConfig>({"seed", "inputs"}), "analysis.fim");
            read_fields(f, c.analysis.fim);
            if (f.contains("seed")) {
                c.analysis.fim.seed = get_as<std::uint64_t>(f.at("seed"), "fim.seed");
            }
            if (f.contains("inputs")) {
                const auto s = get_as<std::string>(f.at("inputs"), "fim.inputs");
                require(s == "rollout" || s == "uniform", "fim.inputs must be rollout or uniform");
                c.analysis.fim_inputs = s == "rollout" ? FimInputs::Rollout : FimInputs::Uniform;
            }
        }
    }
    c.validate();
    return c;
}

json to_json(const RunConfig &c) {
    json env = write_fields(c.env);
    env["geometry"] = write_fields(c.env.geometry);
    env["planner"] = write_fields(c.env.planner);
    json fim = write_fields(c.analysis.fim);
    fim["seed"] = c.analysis.fim.seed;
    fim["inputs"] = c.analysis.fim_inputs == FimInputs::Rollout ? "rollout" : "uniform";
    return {{"agent", agent::to_json(c.agent)},
            {"env", env},
            {"scenes", to_json(c.scenes)},
            {"eval_scenes", to_json(c.eval_scenes)},
            {"seeds", c.seeds},
            {"out", c.out},
            {"analysis", {{"smoothing_window", c.analysis.smoothing_window}, {"fim", fim}}}};
}

RunConfig load_run_config(const std::string &path) {
    std::ifstream in(path);
    require<InputError>(static_cast<bool>(in), "cannot read config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

void apply_noise_spec(qsim::NoiseSpec &noise, const std::string &spec) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const auto eq = item.find('=');
        const std::string key = item.substr(0, eq);
        const std::string val = eq == std::string::npos ? "" : item.substr(eq + 1);
        auto number = [&]() {
            try {
                std::size_t used = 0;
                const double v = std::stod(val, &used);
                require(used == val.size(), "");
                return v;
            } catch (const std::exception &) {
                throw ConfigError("noise: '" + item + "' needs a numeric value");
            }
        };
        if (key == "none") {
            noise = qsim::NoiseSpec{};
        } else if (key == "gate") {
            noise.gate_error_scale = val.empty() ? 0.01 : number();
        } else if (key == "depol") {
            noise.depolarizing_p = number();
        } else if (key == "trajectories") {
            noise.trajectories = static_cast<int>(number());
        } else if (key == "placement") {
            if (val == "per_sublayer") {
                noise.placement = qsim::DepolarizingPlacement::PerSublayer;
            } else if (val == "per_gate") {
                noise.placement = qsim::DepolarizingPlacement::PerGate;
            } else {
                throw ConfigError("noise: placement must be per_sublayer or per_gate");
            }
        } else {
            throw ConfigError("noise: unknown item '" + item + "'");
        }
    }
    noise.validate();
}

void apply_overrides(RunConfig &cfg, const Overrides &o) {
    if (o.seed) cfg.seeds = {*o.seed};
    if (o.out) cfg.out = *o.out;
    if (o.gradient_mode) {
        cfg.agent.quantum.gradient = agent::gradient_mode_from_string(*o.gradient_mode);
    }
    if (o.noise) apply_noise_spec(cfg.agent.quantum.noise, *o.noise);
    if (o.episodes) cfg.agent.episodes = *o.episodes;
    if (o.critic) {
        if (*o.critic == "quantum") {
            cfg.agent.critic = agent::CriticKind::Quantum;
        } else if (*o.critic == "classical") {
            cfg.agent.critic = agent::CriticKind::Classical;
        } else {
            throw ConfigError("unknown critic '" + *o.critic + "' (expected quantum or classical)");
        }
    }
    cfg.validate();
}

std::vector<env::Scene> build_scenes(const ScenesConfig &s, const env::RoadGeometry &geo) {
    std::vector<env::Scene> scenes;
    if (!s.file.empty()) {
        std::ifstream in(s.file);
        require<InputError>(static_cast<bool>(in), "cannot read scene file '" + s.file + "'");
        scenes = env::read_jsonl(in);
    } else {
        auto g = env::SceneGridConfig::defaults(s.split);
        g.geometry = geo;
        if (s.scenarios) g.scenarios = *s.scenarios;
        if (s.speed) {
            g.speed_min = s.speed->min;
            g.speed_max = s.speed->max;
            g.speed_step = s.speed->step;
        }
        if (s.distance) {
            g.distance_min = s.distance->min;
            g.distance_max = s.distance->max;
            g.distance_step = s.distance->step;
        }
        scenes = env::generate_scenes(g);
    }
    if (s.limit > 0 && static_cast<std::size_t>(s.limit) < scenes.size()) {
        scenes.resize(static_cast<std::size_t>(s.limit));
    }
    require(!scenes.empty(), "scene selection is empty");
    return scenes;
}

} // namespace navq::cli
