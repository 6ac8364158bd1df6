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
#include "navq/agent/critic.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "navq/error.hpp"

namespace navq::agent {

using nlohmann::json;

namespace {

void append(std::vector<double> &out, const double *data, Eigen::Index n) {
    out.insert(out.end(), data, data + n);
}

json noise_json(const qsim::NoiseSpec &n) {
    json j = {{"trajectories", n.trajectories},
              {"placement", n.placement == qsim::DepolarizingPlacement::PerSublayer
                                ? "per_sublayer"
                                : "per_gate"}};
    j["gate_error_scale"] = n.gate_error_scale ? json(*n.gate_error_scale) : json(nullptr);
    j["depolarizing_p"] = n.depolarizing_p ? json(*n.depolarizing_p) : json(nullptr);
    return j;
}

} // namespace

const char *to_string(GradientMode m) {
    return m == GradientMode::Backprop ? "backprop-sim" : "parameter-shift";
}

GradientMode gradient_mode_from_string(const std::string &s) {
    if (s == "backprop-sim" || s == "backprop" || s == "adjoint") {
        return GradientMode::Backprop;
    }
    if (s == "parameter-shift" || s == "param-shift") {
        return GradientMode::ParamShift;
    }
    throw ConfigError("unknown gradient mode '" + s +
                      "' (expected backprop-sim or parameter-shift)");
}

void Critic::check_input(const Vec &h) const {
    require(h.size() == input_dim(), "critic input has " + std::to_string(h.size()) +
                                         " entries, expected " +
                                         std::to_string(input_dim()));
}

// --- QuantumCritic ---------------------------------------------------------

QuantumCritic::QuantumCritic(int input_dim, QuantumCriticConfig cfg)
    : cfg_(std::move(cfg)),
      layout_(qidep::plan_layout(input_dim, cfg_.n_qubits, cfg_.layers, cfg_.order)),
      circuit_(qidep::build_circuit(layout_)) {
    cfg_.noise.validate();
    const auto np = static_cast<std::size_t>(layout_.pqc_param_count);
    const auto nq = static_cast<std::size_t>(layout_.n);
    theta.assign(np, 0.0);
    d_theta.assign(np, 0.0);
    w.assign(nq, 0.0);
    d_w.assign(nq, 0.0);
    b.assign(1, 0.0);
    d_b.assign(1, 0.0);
    params_.add("critic.theta", theta.data(), d_theta.data(), np, 1);
    params_.add("critic.w", w.data(), d_w.data(), nq, 1);
    params_.add("critic.b", b.data(), d_b.data(), 1, 1);
}

void QuantumCritic::init(Rng &rng) {
    for (auto &t : theta) {
        t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    const double limit = std::sqrt(6.0 / (layout_.n + 1));
    for (auto &v : w) {
        v = rng.uniform(-limit, limit);
    }
    b[0] = 0.0;
}

std::vector<double> QuantumCritic::encode(const Vec &h) const {
    check_input(h);
    std::vector<double> x(h.data(), h.data() + h.size());
    if (cfg_.input_prescale) {
        for (auto &v : x) {
            v *= std::numbers::pi;
        }
    }
    return qidep::pad_input(x, layout_);
}

double QuantumCritic::value(const Vec &h, Rng &noise) const {
    const auto x = encode(h);
    const auto z = cfg_.noise.enabled() ? qsim::run_circuit(circuit_, x, theta, cfg_.noise, noise)
                                        : qsim::run_circuit(circuit_, x, theta);
    return qsim::readout_value({w, b[0]}, z);
}

CriticGrad QuantumCritic::value_and_grad(const Vec &h, Rng &noise) const {
    const auto x = encode(h);
    const qsim::Readout readout{w, b[0]};
    const auto g = cfg_.gradient == GradientMode::ParamShift
                       ? qsim::param_shift_gradient(circuit_, x, theta, readout, cfg_.noise, noise)
                       : qsim::adjoint_gradient(circuit_, x, theta, readout, cfg_.noise, noise);
    CriticGrad out;
    out.value = g.value;
    out.d_params = g.d_params;
    out.d_params.insert(out.d_params.end(), g.expectations.begin(), g.expectations.end());
    out.d_params.push_back(1.0);
    const double scale = cfg_.input_prescale ? std::numbers::pi : 1.0;
    out.d_input.resize(layout_.p);
    for (int i = 0; i < layout_.p; ++i) {
        out.d_input(i) = scale * g.d_features[static_cast<std::size_t>(i)];
    }
    return out;
}

double QuantumCritic::param_range() const { return std::numbers::pi; }

json QuantumCritic::describe() const {
    json layout;
    qidep::to_json(layout, layout_);
    return {{"kind", "quantum"},
            {"n_qubits", cfg_.n_qubits},
            {"layers", cfg_.layers},
            {"encoding_order", cfg_.order == qidep::EncodingOrder::ZYZ ? "ZYZ" : "XYZ"},
            {"gradient_mode", to_string(cfg_.gradient)},
            {"input_prescale", cfg_.input_prescale},
            {"noise", noise_json(cfg_.noise)},
            {"layout", layout},
            {"param_count", param_count()}};
}

// --- ClassicalCritic -------------------------------------------------------

ClassicalCritic::ClassicalCritic(int input_dim, int hidden)
    : l1(input_dim, hidden), ln(hidden), l2(hidden, 1) {
    require(input_dim >= 1 && hidden >= 1, "classical critic sizes must be >= 1");
    l1.register_params(params_, "critic.l1");
    ln.register_params(params_, "critic.ln");
    l2.register_params(params_, "critic.l2");
}

void ClassicalCritic::init(Rng &rng) {
    l1.init(rng);
    ln.gain.setOnes();
    ln.bias.setZero();
    l2.init(rng);
}

double ClassicalCritic::value(const Vec &h, Rng & /*noise*/) const {
    check_input(h);
    return l2.forward(nn::tanh_forward(ln.forward(l1.forward(h))))(0);
}

CriticGrad ClassicalCritic::value_and_grad(const Vec &h, Rng & /*noise*/) const {
    check_input(h);
    // Backward on scratch copies so the shared gradient buffers stay untouched.
    nn::DenseLayer a = l1;
    nn::LayerNorm n = ln;
    nn::DenseLayer c = l2;
    a.dW.setZero();
    a.db.setZero();
    n.dgain.setZero();
    n.dbias.setZero();
    c.dW.setZero();
    c.db.setZero();

    const Vec z1 = a.forward(h);
    nn::LayerNorm::Cache cache;
    const Vec y = nn::tanh_forward(n.forward(z1, &cache));
    CriticGrad out;
    out.value = c.forward(y)(0);
    const Vec dy = c.backward(y, Vec::Ones(1));
    const Vec dz1 = n.backward(cache, nn::tanh_backward(y, dy));
    out.d_input = a.backward(h, dz1);

    out.d_params.reserve(param_count());
    append(out.d_params, a.dW.data(), a.dW.size());
    append(out.d_params, a.db.data(), a.db.size());
    append(out.d_params, n.dgain.data(), n.dgain.size());
    append(out.d_params, n.dbias.data(), n.dbias.size());
    append(out.d_params, c.dW.data(), c.dW.size());
    append(out.d_params, c.db.data(), c.db.size());
    return out;
}

json ClassicalCritic::describe() const {
    return {{"kind", "classical"},
            {"input_dim", input_dim()},
            {"hidden", l1.out_dim()},
            {"param_count", param_count()}};
}

} // namespace navq::agent
