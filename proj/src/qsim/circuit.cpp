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
#include "navq/qsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "navq/error.hpp"

namespace navq::qsim {

std::string to_string(GateKind k) {
    switch (k) {
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CZ:
        return "CZ";
    }
    return "?";
}

GateOp GateOp::rotation(GateKind k, int target, AngleSource src) {
    require(k != GateKind::CZ, "CZ is not a rotation");
    GateOp g;
    g.kind = k;
    g.target = target;
    g.source = src;
    return g;
}

GateOp GateOp::fixed(GateKind k, int target, double angle) {
    require(k != GateKind::CZ, "CZ is not a rotation");
    GateOp g;
    g.kind = k;
    g.target = target;
    g.angle = angle;
    return g;
}

GateOp GateOp::cz(int control, int target) {
    GateOp g;
    g.kind = GateKind::CZ;
    g.target = target;
    g.control = control;
    return g;
}

Pauli rotation_axis(GateKind k) {
    switch (k) {
    case GateKind::RX:
        return Pauli::X;
    case GateKind::RY:
        return Pauli::Y;
    default:
        return Pauli::Z;
    }
}

void NoiseSpec::validate() const {
    if (gate_error_scale) {
        require(*gate_error_scale >= 0.0 && std::isfinite(*gate_error_scale),
                "gate error scale must be finite and >= 0");
    }
    if (depolarizing_p) {
        require(*depolarizing_p >= 0.0 && *depolarizing_p <= 1.0,
                "depolarizing probability must be in [0, 1]");
    }
    require(trajectories >= 1, "noise trajectories must be >= 1");
}

void Circuit::validate() const {
    require(n_qubits >= 1 && n_qubits <= kMaxQubits, "circuit qubit count out of range");
    for (const auto &g : gates) {
        require(g.target >= 0 && g.target < n_qubits, "gate target out of range");
        if (g.kind == GateKind::CZ) {
            require(g.control.has_value(), "CZ requires a control qubit");
            require(*g.control >= 0 && *g.control < n_qubits, "CZ control out of range");
            require(*g.control != g.target, "CZ control equals target");
        } else {
            require(!g.control.has_value(), "rotations take no control qubit");
        }
    }
    require(std::is_sorted(sublayer_ends.begin(), sublayer_ends.end()),
            "sublayer boundaries must be ascending");
    require(sublayer_ends.empty() || sublayer_ends.back() <= gates.size(),
            "sublayer boundary past end of circuit");
}

std::size_t Circuit::num_data_inputs() const {
    std::size_t n = 0;
    for (const auto &g : gates) {
        if (g.source && g.source->kind == AngleSource::Kind::Data) {
            n = std::max(n, g.source->index + 1);
        }
    }
    return n;
}

std::size_t Circuit::num_params() const {
    std::size_t n = 0;
    for (const auto &g : gates) {
        if (g.source && g.source->kind == AngleSource::Kind::Param) {
            n = std::max(n, g.source->index + 1);
        }
    }
    return n;
}

double resolve_angle(const GateOp &gate, std::span<const double> features,
                     std::span<const double> params) {
    if (!gate.source) {
        return gate.angle;
    }
    const auto &src = *gate.source;
    if (src.kind == AngleSource::Kind::Data) {
        require<LayoutError>(src.index < features.size(),
                             "data index " + std::to_string(src.index) +
                                 " not resolvable (" +
                                 std::to_string(features.size()) + " features)");
        return features[src.index];
    }
    require<LayoutError>(src.index < params.size(),
                         "param index " + std::to_string(src.index) +
                             " not resolvable (" + std::to_string(params.size()) +
                             " params)");
    return params[src.index];
}

StateVector apply_gate(StateVector state, const GateOp &gate) {
    if (gate.kind == GateKind::CZ) {
        require(gate.control.has_value(), "CZ requires a control qubit");
        state.apply_cz(*gate.control, gate.target);
    } else {
        require(!gate.control.has_value(), "rotations take no control qubit");
        state.apply_rotation(rotation_axis(gate.kind), gate.target, gate.angle);
    }
    return state;
}

StateVector apply_gate(StateVector state, const GateOp &gate,
                       std::span<const double> features,
                       std::span<const double> params) {
    GateOp resolved = gate;
    if (gate.is_rotation()) {
        resolved.angle = resolve_angle(gate, features, params);
    }
    return apply_gate(std::move(state), resolved);
}

std::vector<double> perturb_gate_params(std::span<const double> params, Rng &rng,
                                        double scale) {
    std::vector<double> out(params.begin(), params.end());
    for (auto &t : out) {
        t *= 1.0 + scale * rng.uniform();
    }
    return out;
}

namespace {

/// One operation of a sampled trajectory.
struct RealizedOp {
    enum class Kind { Rotation, CZ, PauliError };
    Kind kind = Kind::Rotation;
    Pauli axis = Pauli::Z;
    int target = 0;
    int control = 0;
    double angle = 0.0;
    /// d(realized angle) / d(nominal angle).
    double chain = 1.0;
    std::optional<AngleSource> source;
};

struct ShiftOverride {
    std::size_t gate = 0;
    double shift = 0.0;
};

void inject_depolarizing(std::vector<RealizedOp> &ops, int qubit, double p,
                         Rng &rng) {
    const double u = rng.uniform();
    const std::size_t which = rng.index(3);
    if (u < p) {
        RealizedOp e;
        e.kind = RealizedOp::Kind::PauliError;
        e.axis = which == 0 ? Pauli::X : (which == 1 ? Pauli::Y : Pauli::Z);
        e.target = qubit;
        ops.push_back(e);
    }
}

std::vector<RealizedOp> realize(const Circuit &c, std::span<const double> x,
                                std::span<const double> theta,
                                const NoiseSpec &noise, Rng *rng,
                                std::optional<ShiftOverride> shift = {}) {
    std::vector<RealizedOp> ops;
    ops.reserve(c.gates.size() * 2);
    const bool noisy = noise.enabled() && rng != nullptr;
    // A circuit without sublayer marks is treated as one sublayer.
    const std::vector<std::size_t> whole{c.gates.size()};
    const auto &boundaries = c.sublayer_ends.empty() ? whole : c.sublayer_ends;
    std::size_t next_boundary = 0;
    for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
        const auto &g = c.gates[gi];
        RealizedOp op;
        if (g.kind == GateKind::CZ) {
            op.kind = RealizedOp::Kind::CZ;
            op.control = *g.control;
            op.target = g.target;
        } else {
            op.kind = RealizedOp::Kind::Rotation;
            op.axis = rotation_axis(g.kind);
            op.target = g.target;
            op.source = g.source;
            op.angle = resolve_angle(g, x, theta);
            if (shift && shift->gate == gi) {
                op.angle += shift->shift;
            }
            if (noisy && noise.gate_error_scale) {
                const double factor = 1.0 + *noise.gate_error_scale * rng->uniform();
                op.angle *= factor;
                op.chain = factor;
            }
        }
        ops.push_back(op);

        if (noisy && noise.depolarizing_p) {
            const double p = *noise.depolarizing_p;
            if (noise.placement == DepolarizingPlacement::PerGate) {
                if (g.kind == GateKind::CZ) {
                    inject_depolarizing(ops, *g.control, p, *rng);
                }
                inject_depolarizing(ops, g.target, p, *rng);
            } else {
                while (next_boundary < boundaries.size() &&
                       boundaries[next_boundary] == gi + 1) {
                    for (int q = 0; q < c.n_qubits; ++q) {
                        inject_depolarizing(ops, q, p, *rng);
                    }
                    ++next_boundary;
                }
            }
        }
    }
    return ops;
}

void apply_realized(StateVector &s, const RealizedOp &op) {
    switch (op.kind) {
    case RealizedOp::Kind::Rotation:
        s.apply_rotation(op.axis, op.target, op.angle);
        break;
    case RealizedOp::Kind::CZ:
        s.apply_cz(op.control, op.target);
        break;
    case RealizedOp::Kind::PauliError:
        s.apply_pauli(op.axis, op.target);
        break;
    }
}

// Inverse of `op`; every realized op except rotations is self-inverse.
void apply_realized_inverse(StateVector &s, const RealizedOp &op) {
    if (op.kind == RealizedOp::Kind::Rotation) {
        s.apply_rotation(op.axis, op.target, -op.angle);
    } else {
        apply_realized(s, op);
    }
}

StateVector simulate(int n_qubits, const std::vector<RealizedOp> &ops) {
    StateVector s(n_qubits);
    for (const auto &op : ops) {
        apply_realized(s, op);
    }
    return s;
}

std::vector<double> all_expectations(const StateVector &s) {
    std::vector<double> z(static_cast<std::size_t>(s.num_qubits()));
    for (int q = 0; q < s.num_qubits(); ++q) {
        z[static_cast<std::size_t>(q)] = s.expectation_z(q);
    }
    return z;
}

void check_inputs(const Circuit &c, std::span<const double> x,
                  std::span<const double> theta) {
    c.validate();
    for (const auto &g : c.gates) {
        if (g.is_rotation()) {
            require(std::isfinite(resolve_angle(g, x, theta)),
                    "rotation angle must be finite");
        }
    }
}

void check_readout(const Circuit &c, const Readout &r) {
    require<InputError>(r.weights.size() == static_cast<std::size_t>(c.n_qubits),
                        "readout weight count must equal qubit count");
}

int trajectory_count(const NoiseSpec &noise) {
    return noise.enabled() ? noise.trajectories : 1;
}

} // namespace

std::vector<double> run_circuit(const Circuit &circuit,
                                std::span<const double> features,
                                std::span<const double> params,
                                const NoiseSpec &noise, Rng &rng) {
    check_inputs(circuit, features, params);
    noise.validate();
    const int n_traj = trajectory_count(noise);
    std::vector<double> mean(static_cast<std::size_t>(circuit.n_qubits), 0.0);
    for (int t = 0; t < n_traj; ++t) {
        const auto ops = realize(circuit, features, params, noise, &rng);
        const auto z = all_expectations(simulate(circuit.n_qubits, ops));
        for (std::size_t q = 0; q < mean.size(); ++q) {
            mean[q] += z[q];
        }
    }
    for (auto &m : mean) {
        m /= n_traj;
    }
    return mean;
}

std::vector<double> run_circuit(const Circuit &circuit,
                                std::span<const double> features,
                                std::span<const double> params) {
    Rng unused(0);
    return run_circuit(circuit, features, params, NoiseSpec{}, unused);
}

double readout_value(const Readout &readout, std::span<const double> expectations) {
    require<InputError>(readout.weights.size() == expectations.size(),
                        "readout weight count must equal expectation count");
    double v = readout.bias;
    for (std::size_t i = 0; i < expectations.size(); ++i) {
        v += readout.weights[i] * expectations[i];
    }
    return v;
}

CircuitGradient adjoint_gradient(const Circuit &circuit,
                                 std::span<const double> features,
                                 std::span<const double> params,
                                 const Readout &readout, const NoiseSpec &noise,
                                 Rng &rng) {
    check_inputs(circuit, features, params);
    check_readout(circuit, readout);
    noise.validate();

    CircuitGradient out;
    out.d_params.assign(params.size(), 0.0);
    out.d_features.assign(features.size(), 0.0);
    out.expectations.assign(static_cast<std::size_t>(circuit.n_qubits), 0.0);

    const int n_traj = trajectory_count(noise);
    for (int t = 0; t < n_traj; ++t) {
        const auto ops = realize(circuit, features, params, noise, &rng);
        StateVector phi = simulate(circuit.n_qubits, ops);
        const auto z = all_expectations(phi);
        for (std::size_t q = 0; q < z.size(); ++q) {
            out.expectations[q] += z[q];
        }

        // lambda = O |phi> with O = sum_i w_i Z_i, diagonal in the basis.
        std::vector<Complex> lam_amps(phi.size());
        for (std::size_t b = 0; b < phi.size(); ++b) {
            double o = 0.0;
            for (int q = 0; q < circuit.n_qubits; ++q) {
                o += ((b >> static_cast<unsigned>(q)) & 1U) ? -readout.weights[q]
                                                            : readout.weights[q];
            }
            lam_amps[b] = o * phi[b];
        }
        StateVector lam = StateVector::from_amplitudes(std::move(lam_amps));

        for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
            const auto &op = *it;
            if (op.kind == RealizedOp::Kind::Rotation && op.source) {
                // dV/d(angle) = Im <lambda| P |phi> for exp(-i angle P / 2).
                const double g = kernels::inner_pauli(lam.amplitudes(),
                                                      phi.amplitudes(), op.target,
                                                      op.axis)
                                     .imag() *
                                 op.chain;
                if (op.source->kind == AngleSource::Kind::Param) {
                    out.d_params[op.source->index] += g;
                } else {
                    out.d_features[op.source->index] += g;
                }
            }
            apply_realized_inverse(phi, op);
            apply_realized_inverse(lam, op);
        }
    }

    const double inv = 1.0 / n_traj;
    for (auto &v : out.expectations) {
        v *= inv;
    }
    for (auto &v : out.d_params) {
        v *= inv;
    }
    for (auto &v : out.d_features) {
        v *= inv;
    }
    out.value = readout_value(readout, out.expectations);
    return out;
}

CircuitGradient param_shift_gradient(const Circuit &circuit,
                                     std::span<const double> features,
                                     std::span<const double> params,
                                     const Readout &readout,
                                     const NoiseSpec &noise, Rng &rng) {
    check_inputs(circuit, features, params);
    check_readout(circuit, readout);
    noise.validate();

    std::vector<bool> used(params.size(), false);
    std::vector<std::size_t> shifted_gates;
    for (std::size_t gi = 0; gi < circuit.gates.size(); ++gi) {
        const auto &g = circuit.gates[gi];
        if (g.is_rotation() && g.source) {
            shifted_gates.push_back(gi);
            if (g.source->kind == AngleSource::Kind::Param) {
                used[g.source->index] = true;
            }
        }
    }
    for (std::size_t k = 0; k < used.size(); ++k) {
        require<LayoutError>(used[k], "parameter " + std::to_string(k) +
                                          " is not used by any rotation");
    }

    const std::uint64_t base = rng.split();
    const int n_traj = trajectory_count(noise);
    const std::size_t n_eval = 2 * shifted_gates.size() + 1;
    std::vector<double> values(n_eval, 0.0);
    std::vector<std::vector<double>> expectations(n_eval);
    const auto n_eval_i = static_cast<std::int64_t>(n_eval);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t e = 0; e < n_eval_i; ++e) {
        const auto ue = static_cast<std::size_t>(e);
        std::optional<ShiftOverride> shift;
        if (ue + 1 < n_eval) {
            const double s = (ue % 2 == 0) ? std::numbers::pi / 2 : -std::numbers::pi / 2;
            shift = ShiftOverride{shifted_gates[ue / 2], s};
        }
        Rng local(derive_seed(base, {ue}));
        std::vector<double> mean(static_cast<std::size_t>(circuit.n_qubits), 0.0);
        for (int t = 0; t < n_traj; ++t) {
            const auto ops = realize(circuit, features, params, noise, &local, shift);
            const auto z = all_expectations(simulate(circuit.n_qubits, ops));
            for (std::size_t q = 0; q < mean.size(); ++q) {
                mean[q] += z[q] / n_traj;
            }
        }
        values[ue] = readout_value(readout, mean);
        expectations[ue] = std::move(mean);
    }

    CircuitGradient out;
    out.d_params.assign(params.size(), 0.0);
    out.d_features.assign(features.size(), 0.0);
    for (std::size_t j = 0; j < shifted_gates.size(); ++j) {
        const double g = 0.5 * (values[2 * j] - values[2 * j + 1]);
        const auto &src = *circuit.gates[shifted_gates[j]].source;
        if (src.kind == AngleSource::Kind::Param) {
            out.d_params[src.index] += g;
        } else {
            out.d_features[src.index] += g;
        }
    }
    out.expectations = expectations.back();
    out.value = values.back();
    return out;
}

std::vector<double> param_shift_gradient(const Circuit &circuit,
                                         std::span<const double> features,
                                         std::span<const double> params,
                                         std::span<const double> readout_weights,
                                         double readout_bias) {
    Rng unused(0);
    return param_shift_gradient(circuit, features, params,
                                Readout{readout_weights, readout_bias}, NoiseSpec{},
                                unused)
        .d_params;
}

} // namespace navq::qsim
