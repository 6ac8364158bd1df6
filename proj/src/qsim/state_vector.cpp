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
#include "navq/qsim/state_vector.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "navq/error.hpp"

namespace navq::qsim {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    require(n_qubits >= 1 && n_qubits <= kMaxQubits,
            "n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                "], got " + std::to_string(n_qubits));
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amps) {
    require(amps.size() >= 2 && std::has_single_bit(amps.size()),
            "amplitude count must be a power of two >= 2");
    StateVector s;
    s.n_qubits_ = std::countr_zero(amps.size());
    require(s.n_qubits_ <= kMaxQubits, "too many qubits");
    s.amps_ = std::move(amps);
    return s;
}

void StateVector::check_qubit(int q) const {
    require(q >= 0 && q < n_qubits_, "qubit index " + std::to_string(q) +
                                         " out of range for " +
                                         std::to_string(n_qubits_) + " qubits");
}

double StateVector::norm() const { return std::sqrt(kernels::norm_sq(amps_)); }

double StateVector::expectation_z(int qubit) const {
    check_qubit(qubit);
    return kernels::expectation_z(amps_, qubit);
}

void StateVector::apply_rotation(Pauli axis, int target, double angle) {
    check_qubit(target);
    require(std::isfinite(angle), "rotation angle must be finite");
    kernels::apply_1q(amps_, target, rotation_matrix(axis, angle));
}

void StateVector::apply_cz(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    require(control != target, "CZ needs distinct control and target");
    kernels::apply_cz(amps_, control, target);
}

void StateVector::apply_pauli(Pauli p, int target) {
    check_qubit(target);
    kernels::apply_pauli(amps_, target, p);
}

Mat2 rotation_matrix(Pauli axis, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (axis) {
    case Pauli::X:
        return {Complex{c, 0.0}, Complex{0.0, -s}, Complex{0.0, -s}, Complex{c, 0.0}};
    case Pauli::Y:
        return {Complex{c, 0.0}, Complex{-s, 0.0}, Complex{s, 0.0}, Complex{c, 0.0}};
    case Pauli::Z:
    default:
        return {Complex{c, -s}, Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{c, s}};
    }
}

StateVector init_state(int n_qubits) { return StateVector(n_qubits); }

double expectation_z(const StateVector &state, int qubit) {
    return state.expectation_z(qubit);
}

std::optional<Pauli> depolarize_step(StateVector &state, int qubit, double p,
                                     Rng &rng) {
    require(p >= 0.0 && p <= 1.0, "depolarizing probability must be in [0, 1]");
    // Always draw twice so the stream position does not depend on outcomes.
    const double u = rng.uniform();
    const std::size_t which = rng.index(3);
    if (u >= p) {
        return std::nullopt;
    }
    const Pauli err = which == 0 ? Pauli::X : (which == 1 ? Pauli::Y : Pauli::Z);
    state.apply_pauli(err, qubit);
    return err;
}

} // namespace navq::qsim
