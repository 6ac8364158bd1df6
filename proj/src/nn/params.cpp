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
#include "navq/nn/params.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "navq/error.hpp"

namespace navq::nn {

void ParamSet::add(std::string name, double *value, double *grad, std::size_t rows,
                   std::size_t cols) {
    require(find(name) == nullptr, "duplicate parameter name " + name);
    refs_.push_back(ParamRef{std::move(name), value, grad, rows, cols});
}

std::size_t ParamSet::total_size() const noexcept {
    std::size_t n = 0;
    for (const auto &r : refs_) {
        n += r.size();
    }
    return n;
}

const ParamRef *ParamSet::find(const std::string &name) const {
    for (const auto &r : refs_) {
        if (r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

void ParamSet::zero_grad() {
    for (auto &r : refs_) {
        std::fill(r.grad, r.grad + r.size(), 0.0);
    }
}

std::vector<double> ParamSet::values() const {
    std::vector<double> out;
    out.reserve(total_size());
    for (const auto &r : refs_) {
        out.insert(out.end(), r.value, r.value + r.size());
    }
    return out;
}

std::vector<double> ParamSet::grads() const {
    std::vector<double> out;
    out.reserve(total_size());
    for (const auto &r : refs_) {
        out.insert(out.end(), r.grad, r.grad + r.size());
    }
    return out;
}

void ParamSet::set_values(std::span<const double> flat) {
    require<InputError>(flat.size() == total_size(), "flat parameter size mismatch");
    std::size_t off = 0;
    for (auto &r : refs_) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(off), r.size(), r.value);
        off += r.size();
    }
}

nlohmann::json ParamSet::to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto &r : refs_) {
        arr.push_back({{"name", r.name},
                       {"shape", {r.rows, r.cols}},
                       {"data", std::vector<double>(r.value, r.value + r.size())}});
    }
    return nlohmann::json{{"layout", "column-major"}, {"params", arr}};
}

void ParamSet::load_json(const nlohmann::json &j) {
    require<InputError>(j.contains("params") && j["params"].is_array(),
                        "checkpoint has no params array");
    for (auto &r : refs_) {
        const nlohmann::json *entry = nullptr;
        for (const auto &e : j["params"]) {
            if (e.at("name").get<std::string>() == r.name) {
                entry = &e;
                break;
            }
        }
        require<InputError>(entry != nullptr, "checkpoint is missing parameter " + r.name);
        const auto shape = entry->at("shape").get<std::vector<std::size_t>>();
        require<InputError>(shape.size() == 2 && shape[0] == r.rows && shape[1] == r.cols,
                            "shape mismatch for parameter " + r.name);
        const auto data = entry->at("data").get<std::vector<double>>();
        require<InputError>(data.size() == r.size(), "data size mismatch for " + r.name);
        std::copy(data.begin(), data.end(), r.value);
    }
}

void adam_update(AdamState &state, std::span<double> params,
                 std::span<const double> grads) {
    require(params.size() == grads.size(), "Adam: params and grads differ in size");
    if (state.m.empty() && state.step == 0) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    require(state.m.size() == params.size(), "Adam: state shape does not match params");
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

void adam_update(AdamState &state, ParamSet &set) {
    auto values = set.values();
    const auto grads = set.grads();
    adam_update(state, values, grads);
    set.set_values(values);
}

double finite_diff_check(const std::function<double(std::span<const double>)> &loss,
                         std::span<const double> params,
                         std::span<const double> analytic, double h) {
    require(h >= 1e-7 && h <= 1e-3, "finite-difference step must be in [1e-7, 1e-3]");
    require(params.size() == analytic.size(), "gradient size mismatch");
    std::vector<double> x(params.begin(), params.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double x0 = x[i];
        x[i] = x0 + h;
        const double fp = loss(x);
        x[i] = x0 - h;
        const double fm = loss(x);
        x[i] = x0;
        const double numeric = (fp - fm) / (2.0 * h);
        const double denom =
            std::max({std::abs(numeric), std::abs(analytic[i]), kRelErrorFloor});
        worst = std::max(worst, std::abs(numeric - analytic[i]) / denom);
    }
    return worst;
}

} // namespace navq::nn
