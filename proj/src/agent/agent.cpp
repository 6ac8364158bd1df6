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
#include "navq/agent/agent.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "navq/error.hpp"

namespace navq::agent {

using nlohmann::json;

namespace {

constexpr const char *kCheckpointFormat = "navq-checkpoint-v1";

void reject_unknown(const json &j, const std::set<std::string> &allowed, const std::string &where) {
    require(j.is_object(), where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        require(allowed.count(it.key()) != 0, "unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
void read_opt(const json &j, const char *key, T &out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception &e) {
            throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
        }
    }
}

json noise_to_json(const qsim::NoiseSpec &n) {
    json j = {{"trajectories", n.trajectories},
              {"placement", n.placement == qsim::DepolarizingPlacement::PerSublayer
                                ? "per_sublayer"
                                : "per_gate"}};
    j["gate_error_scale"] = n.gate_error_scale ? json(*n.gate_error_scale) : json(nullptr);
    j["depolarizing_p"] = n.depolarizing_p ? json(*n.depolarizing_p) : json(nullptr);
    return j;
}

qsim::NoiseSpec noise_from_json(const json &j) {
    reject_unknown(j, {"gate_error_scale", "depolarizing_p", "placement", "trajectories"},
                   "quantum.noise");
    qsim::NoiseSpec n;
    if (j.contains("gate_error_scale") && !j.at("gate_error_scale").is_null()) {
        n.gate_error_scale = j.at("gate_error_scale").get<double>();
    }
    if (j.contains("depolarizing_p") && !j.at("depolarizing_p").is_null()) {
        n.depolarizing_p = j.at("depolarizing_p").get<double>();
    }
    std::string placement = "per_sublayer";
    read_opt(j, "placement", placement);
    if (placement == "per_sublayer") {
        n.placement = qsim::DepolarizingPlacement::PerSublayer;
    } else if (placement == "per_gate") {
        n.placement = qsim::DepolarizingPlacement::PerGate;
    } else {
        throw ConfigError("unknown noise placement '" + placement + "'");
    }
    read_opt(j, "trajectories", n.trajectories);
    n.validate();
    return n;
}

} // namespace

const char *to_string(CriticKind k) { return k == CriticKind::Quantum ? "quantum" : "classical"; }

void AgentConfig::validate() const {
    require(gamma >= 0.0 && gamma <= 1.0, "gamma must be in [0, 1]");
    require(beta_entropy >= 0.0, "beta_entropy must be >= 0");
    require(lr > 0.0, "lr must be positive");
    require(reward_scale > 0.0, "reward_scale must be positive");
    require(episodes >= 0, "episodes must be >= 0");
    require(model.enc_hidden >= 1 && model.enc_out >= 1 && model.lstm_hidden >= 1,
            "model sizes must be >= 1");
    require(classical_hidden >= 1, "classical_hidden must be >= 1");
    quantum.noise.validate();
}

json to_json(const AgentConfig &c) {
    return {{"critic", to_string(c.critic)},
            {"quantum",
             {{"n_qubits", c.quantum.n_qubits},
              {"layers", c.quantum.layers},
              {"encoding_order", c.quantum.order == qidep::EncodingOrder::ZYZ ? "ZYZ" : "XYZ"},
              {"gradient_mode", to_string(c.quantum.gradient)},
              {"input_prescale", c.quantum.input_prescale},
              {"noise", noise_to_json(c.quantum.noise)}}},
            {"classical_hidden", c.classical_hidden},
            {"model",
             {{"enc_hidden", c.model.enc_hidden},
              {"enc_out", c.model.enc_out},
              {"lstm_hidden", c.model.lstm_hidden}}},
            {"gamma", c.gamma},
            {"beta_entropy", c.beta_entropy},
            {"literal_entropy", c.literal_entropy},
            {"lr", c.lr},
            {"reward_scale", c.reward_scale},
            {"episodes", c.episodes},
            {"seed", c.seed}};
}

AgentConfig agent_config_from_json(const json &j) {
    reject_unknown(j,
                   {"critic", "quantum", "classical_hidden", "model", "gamma", "beta_entropy",
                    "literal_entropy", "lr", "reward_scale", "episodes", "seed"},
                   "agent");
    AgentConfig c;
    if (j.contains("critic")) {
        const auto k = j.at("critic").get<std::string>();
        if (k == "quantum") {
            c.critic = CriticKind::Quantum;
        } else if (k == "classical") {
            c.critic = CriticKind::Classical;
        } else {
            throw ConfigError("unknown critic kind '" + k + "'");
        }
    }
    if (j.contains("quantum")) {
        const auto &q = j.at("quantum");
        reject_unknown(q,
                       {"n_qubits", "layers", "encoding_order", "gradient_mode",
                        "input_prescale", "noise"},
                       "agent.quantum");
        read_opt(q, "n_qubits", c.quantum.n_qubits);
        read_opt(q, "layers", c.quantum.layers);
        if (q.contains("encoding_order")) {
            const auto o = q.at("encoding_order").get<std::string>();
            require(o == "ZYZ" || o == "XYZ", "encoding_order must be ZYZ or XYZ");
            c.quantum.order = o == "ZYZ" ? qidep::EncodingOrder::ZYZ : qidep::EncodingOrder::XYZ;
        }
        if (q.contains("gradient_mode")) {
            c.quantum.gradient = gradient_mode_from_string(q.at("gradient_mode").get<std::string>());
        }
        read_opt(q, "input_prescale", c.quantum.input_prescale);
        if (q.contains("noise")) {
            c.quantum.noise = noise_from_json(q.at("noise"));
        }
    }
    read_opt(j, "classical_hidden", c.classical_hidden);
    if (j.contains("model")) {
        const auto &m = j.at("model");
        reject_unknown(m, {"enc_hidden", "enc_out", "lstm_hidden"}, "agent.model");
        read_opt(m, "enc_hidden", c.model.enc_hidden);
        read_opt(m, "enc_out", c.model.enc_out);
        read_opt(m, "lstm_hidden", c.model.lstm_hidden);
    }
    read_opt(j, "gamma", c.gamma);
    read_opt(j, "beta_entropy", c.beta_entropy);
    read_opt(j, "literal_entropy", c.literal_entropy);
    read_opt(j, "lr", c.lr);
    read_opt(j, "reward_scale", c.reward_scale);
    read_opt(j, "episodes", c.episodes);
    read_opt(j, "seed", c.seed);
    c.validate();
    return c;
}

Vec observation_features(const env::Observation &obs, const env::EnvConfig &cfg) {
    const double pos = cfg.sensing_radius;
    const double vmax = cfg.max_speed_kmh * env::kKmhToMs;
    std::vector<double> f = obs.flatten();
    Vec x = Eigen::Map<const Vec>(f.data(), static_cast<Eigen::Index>(f.size()));
    x(0) /= cfg.geometry.road_length;
    x(1) /= cfg.geometry.road_length;
    x(2) /= cfg.geometry.lane_width;
    x(3) /= vmax;
    x(7) /= cfg.goal_reward;
    for (Eigen::Index s = 8; s + 4 < x.size(); s += 5) {
        x(s) /= pos;
        x(s + 1) /= pos;
        x(s + 2) /= vmax;
        x(s + 3) /= vmax;
    }
    return x;
}

Vec side_features(const env::Observation &obs, const env::CarState &car,
                  const env::EnvConfig &cfg) {
    const double vmax = cfg.max_speed_kmh * env::kKmhToMs;
    Vec s(kSideFeatures);
    s(0) = obs.prev_reward / cfg.goal_reward;
    s(1) = car.v * std::cos(car.heading) / vmax;
    s(2) = car.v * std::sin(car.heading) / vmax;
    s(3) = obs.prev_acc[0] - obs.prev_acc[2];
    return s;
}

Agent::Agent(AgentConfig cfg, int obs_dim)
    : cfg_(std::move(cfg)), obs_dim_(obs_dim) {
    cfg_.validate();
    require(obs_dim >= 1, "obs_dim must be >= 1");
    const auto &m = cfg_.model;
    enc1 = nn::DenseLayer(obs_dim, m.enc_hidden);
    enc2 = nn::DenseLayer(m.enc_hidden, m.enc_out);
    lstm = nn::LstmCell(m.enc_out + kSideFeatures, m.lstm_hidden);
    actor = nn::DenseLayer(m.lstm_hidden, env::kNumAcc);
    if (cfg_.critic == CriticKind::Quantum) {
        critic_ = std::make_unique<QuantumCritic>(m.lstm_hidden, cfg_.quantum);
    } else {
        critic_ = std::make_unique<ClassicalCritic>(m.lstm_hidden, cfg_.classical_hidden);
    }
    enc1.register_params(params_, "enc1");
    enc2.register_params(params_, "enc2");
    lstm.register_params(params_, "lstm");
    actor.register_params(params_, "actor");
    for (const auto &r : critic_->params().entries()) {
        params_.add(r.name, r.value, r.grad, r.rows, r.cols);
    }
    adam_.lr = cfg_.lr;
}

void Agent::init() {
    Rng rng = Rng::substream(cfg_.seed, "init");
    init(rng);
}

void Agent::init(Rng &rng) {
    enc1.init(rng);
    enc2.init(rng);
    lstm.init(rng);
    actor.init(rng);
    critic_->init(rng);
    adam_ = nn::AdamState{};
    adam_.lr = cfg_.lr;
}

Agent::Recurrent Agent::initial_state() const {
    return {Vec::Zero(cfg_.model.lstm_hidden), Vec::Zero(cfg_.model.lstm_hidden)};
}

Vec Agent::advance(const Vec &x, const Vec &side, Recurrent &state, StepCache *cache) const {
    require(x.size() == obs_dim_, "observation feature size mismatch");
    require(side.size() == kSideFeatures, "side feature size mismatch");
    const Vec e1 = nn::tanh_forward(enc1.forward(x));
    const Vec e2 = nn::tanh_forward(enc2.forward(e1));
    Vec in(e2.size() + kSideFeatures);
    in << e2, side;
    auto [h, c] = lstm.step(in, state.h, state.c, cache ? &cache->lstm : nullptr);
    if (cache) {
        cache->x = x;
        cache->side = side;
        cache->e1 = e1;
        cache->e2 = e2;
        cache->h = h;
    }
    state.h = h;
    state.c = std::move(c);
    return h;
}

std::pair<Vec, Vec> Agent::backward_step(const StepCache &cache, const Vec &dh, const Vec &dc) {
    auto g = lstm.backward(cache.lstm, dh, dc);
    const Vec de2 = g.dx.head(cache.e2.size());
    const Vec de1 = enc2.backward(cache.e1, nn::tanh_backward(cache.e2, de2));
    (void)enc1.backward(cache.x, nn::tanh_backward(cache.e1, de1));
    return {std::move(g.dh_prev), std::move(g.dc_prev)};
}

std::size_t Agent::trunk_param_count() const {
    return enc1.param_count() + enc2.param_count() + lstm.param_count() + actor.param_count();
}

json Agent::checkpoint() const {
    return {{"format", kCheckpointFormat},
            {"agent_config", to_json(cfg_)},
            {"obs_dim", obs_dim_},
            {"critic", critic_->describe()},
            {"params", params_.to_json()}};
}

std::unique_ptr<Agent> Agent::from_checkpoint(const json &j) {
    try {
        require<InputError>(j.value("format", std::string()) == kCheckpointFormat,
                            "not a navq checkpoint");
        auto agent = std::make_unique<Agent>(agent_config_from_json(j.at("agent_config")),
                                             j.at("obs_dim").get<int>());
        agent->params_.load_json(j.at("params"));
        return agent;
    } catch (const json::exception &e) {
        throw InputError(std::string("malformed checkpoint: ") + e.what());
    } catch (const ConfigError &e) {
        throw InputError(std::string("checkpoint config: ") + e.what());
    }
}

} // namespace navq::agent
