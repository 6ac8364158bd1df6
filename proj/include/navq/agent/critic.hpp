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
 * Value heads on top of the LSTM state: the hybrid quantum critic (QIDEP
 * circuit with a linear readout of the Z expectations) and the classical
 * dense critic.
 *
 * Critics are immovable because their ParamSet points into their own
 * members; hold them through `std::unique_ptr`.
 */
#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "navq/nn/layers.hpp"
#include "navq/nn/params.hpp"
#include "navq/qidep.hpp"
#include "navq/qsim/circuit.hpp"
#include "navq/rng.hpp"

namespace navq::agent {

using nn::Vec;

enum class GradientMode {
    Backprop,   ///< analytic / adjoint through the simulation
    ParamShift, ///< parameter-shift rule (quantum critic only)
};

const char *to_string(GradientMode m);
GradientMode gradient_mode_from_string(const std::string &s);

struct CriticGrad {
    double value = 0.0;
    /// dV/dparams in the order of `Critic::params()`.
    std::vector<double> d_params;
    /// dV/dinput.
    Vec d_input;
};

class Critic {
  public:
    Critic() = default;
    Critic(const Critic &) = delete;
    Critic &operator=(const Critic &) = delete;
    virtual ~Critic() = default;

    [[nodiscard]] virtual std::string kind() const = 0;
    [[nodiscard]] virtual int input_dim() const = 0;
    virtual void init(Rng &rng) = 0;

    /// ConfigError if |h| != input_dim(). `noise` feeds the noise model.
    [[nodiscard]] virtual double value(const Vec &h, Rng &noise) const = 0;
    [[nodiscard]] virtual CriticGrad value_and_grad(const Vec &h, Rng &noise) const = 0;

    /// Uniform sampling cube used for capacity analysis.
    [[nodiscard]] virtual double param_range() const = 0;
    [[nodiscard]] virtual nlohmann::json describe() const = 0;

    [[nodiscard]] nn::ParamSet &params() { return params_; }
    [[nodiscard]] const nn::ParamSet &params() const { return params_; }
    [[nodiscard]] std::size_t param_count() const { return params_.total_size(); }

  protected:
    void check_input(const Vec &h) const;
    nn::ParamSet params_;
};

struct QuantumCriticConfig {
    int n_qubits = 4;
    int layers = 2;
    qidep::EncodingOrder order = qidep::EncodingOrder::ZYZ;
    qsim::NoiseSpec noise;
    GradientMode gradient = GradientMode::Backprop;
    /// Multiply inputs by pi before encoding.
    bool input_prescale = false;
};

/// V = b + sum_i w_i <Z_i> of the QIDEP circuit on the padded input.
class QuantumCritic final : public Critic {
  public:
    QuantumCritic(int input_dim, QuantumCriticConfig cfg);

    [[nodiscard]] std::string kind() const override { return "quantum"; }
    [[nodiscard]] int input_dim() const override { return layout_.p; }
    void init(Rng &rng) override;
    [[nodiscard]] double value(const Vec &h, Rng &noise) const override;
    [[nodiscard]] CriticGrad value_and_grad(const Vec &h, Rng &noise) const override;
    [[nodiscard]] double param_range() const override;
    [[nodiscard]] nlohmann::json describe() const override;

    [[nodiscard]] const qidep::QidepLayout &layout() const { return layout_; }
    [[nodiscard]] const qsim::Circuit &circuit() const { return circuit_; }
    [[nodiscard]] const QuantumCriticConfig &config() const { return cfg_; }

    std::vector<double> theta, d_theta;
    std::vector<double> w, d_w;
    std::vector<double> b, d_b; ///< single entry

  private:
    [[nodiscard]] std::vector<double> encode(const Vec &h) const;

    QuantumCriticConfig cfg_;
    qidep::QidepLayout layout_;
    qsim::Circuit circuit_;
};

/// Dense(in -> 64) -> LayerNorm(64) -> tanh -> Dense(64 -> 1).
class ClassicalCritic final : public Critic {
  public:
    explicit ClassicalCritic(int input_dim, int hidden = 64);

    [[nodiscard]] std::string kind() const override { return "classical"; }
    [[nodiscard]] int input_dim() const override { return static_cast<int>(l1.in_dim()); }
    void init(Rng &rng) override;
    [[nodiscard]] double value(const Vec &h, Rng &noise) const override;
    [[nodiscard]] CriticGrad value_and_grad(const Vec &h, Rng &noise) const override;
    [[nodiscard]] double param_range() const override { return 1.0; }
    [[nodiscard]] nlohmann::json describe() const override;

    nn::DenseLayer l1;
    nn::LayerNorm ln;
    nn::DenseLayer l2;
};

} // namespace navq::agent
