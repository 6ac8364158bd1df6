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
 * Gate lists, noisy trajectory execution, and the two circuit gradient
 * routes: adjoint differentiation ("backprop through simulation") and the
 * parameter-shift rule.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "navq/qsim/state_vector.hpp"
#include "navq/rng.hpp"

namespace navq::qsim {

enum class GateKind { RX, RY, RZ, CZ };

std::string to_string(GateKind k);

/// Where a rotation takes its angle from.
struct AngleSource {
    enum class Kind { Data, Param };
    Kind kind = Kind::Param;
    std::size_t index = 0;

    static AngleSource data(std::size_t i) { return {Kind::Data, i}; }
    static AngleSource param(std::size_t i) { return {Kind::Param, i}; }
    bool operator==(const AngleSource &) const = default;
};

struct GateOp {
    GateKind kind = GateKind::RZ;
    int target = 0;
    std::optional<int> control;          ///< CZ only
    double angle = 0.0;                  ///< used when `source` is empty
    std::optional<AngleSource> source;   ///< rotations only

    static GateOp rotation(GateKind k, int target, AngleSource src);
    static GateOp fixed(GateKind k, int target, double angle);
    static GateOp cz(int control, int target);

    [[nodiscard]] bool is_rotation() const noexcept { return kind != GateKind::CZ; }
    bool operator==(const GateOp &) const = default;
};

Pauli rotation_axis(GateKind k);

/// Where depolarizing events are injected.
enum class DepolarizingPlacement {
    PerSublayer, ///< after every sublayer boundary, on every qubit
    PerGate,     ///< after every gate, on the qubits it touched
};

struct NoiseSpec {
    /// Multiplicative gate-angle error: angle <- angle (1 + scale * delta),
    /// delta ~ U(0, 1), drawn independently for every gate application.
    std::optional<double> gate_error_scale;
    /// Per-qubit depolarizing probability at each injection point.
    std::optional<double> depolarizing_p;
    DepolarizingPlacement placement = DepolarizingPlacement::PerSublayer;
    /// Trajectories averaged per circuit evaluation when noise is on.
    int trajectories = 1;

    [[nodiscard]] bool enabled() const noexcept {
        return gate_error_scale.has_value() || depolarizing_p.has_value();
    }
    void validate() const;
};

struct Circuit {
    int n_qubits = 1;
    std::vector<GateOp> gates;
    /// One past the last gate of each sublayer, ascending.
    std::vector<std::size_t> sublayer_ends;

    /// ConfigError on bad qubit indices or malformed CZ.
    void validate() const;
    [[nodiscard]] std::size_t num_data_inputs() const;
    [[nodiscard]] std::size_t num_params() const;
};

/// Angle of a rotation gate after resolving its source; LayoutError if the
/// referenced feature or parameter does not exist.
double resolve_angle(const GateOp &gate, std::span<const double> features,
                     std::span<const double> params);

/// Applies `gate` using its fixed angle (sources are not consulted).
StateVector apply_gate(StateVector state, const GateOp &gate);

/// Applies `gate` with its angle resolved from `features`/`params`.
StateVector apply_gate(StateVector state, const GateOp &gate,
                       std::span<const double> features,
                       std::span<const double> params);

/// theta_k (1 + scale * delta_k), delta_k ~ U(0, 1).
std::vector<double> perturb_gate_params(std::span<const double> params, Rng &rng,
                                        double scale = 0.01);

/// (<Z_0>, ..., <Z_{n-1}>) after the circuit. With noise on, the mean over
/// `noise.trajectories` sampled trajectories.
std::vector<double> run_circuit(const Circuit &circuit,
                                std::span<const double> features,
                                std::span<const double> params,
                                const NoiseSpec &noise, Rng &rng);

/// Noise-free convenience overload.
std::vector<double> run_circuit(const Circuit &circuit,
                                std::span<const double> features,
                                std::span<const double> params);

/// Linear readout V = bias + sum_i weights_i <Z_i>.
struct Readout {
    std::span<const double> weights;
    double bias = 0.0;
};

double readout_value(const Readout &readout, std::span<const double> expectations);

struct CircuitGradient {
    double value = 0.0;
    std::vector<double> expectations;
    std::vector<double> d_params;   ///< dV/dtheta
    std::vector<double> d_features; ///< dV/dx
};

/// Reverse-mode (adjoint) derivative of the readout through the simulation.
CircuitGradient adjoint_gradient(const Circuit &circuit,
                                 std::span<const double> features,
                                 std::span<const double> params,
                                 const Readout &readout, const NoiseSpec &noise,
                                 Rng &rng);

/// Parameter-shift derivative: (V(a + pi/2) - V(a - pi/2)) / 2 per rotation,
/// summed over rotations sharing a source. Shifted evaluations are
/// independent and run in parallel; each resamples noise. Throws
/// LayoutError if some parameter index is used by no gate.
CircuitGradient param_shift_gradient(const Circuit &circuit,
                                     std::span<const double> features,
                                     std::span<const double> params,
                                     const Readout &readout,
                                     const NoiseSpec &noise, Rng &rng);

/// Noise-free parameter-shift gradient with respect to `params` only.
std::vector<double> param_shift_gradient(const Circuit &circuit,
                                         std::span<const double> features,
                                         std::span<const double> params,
                                         std::span<const double> readout_weights,
                                         double readout_bias);

} // namespace navq::qsim
