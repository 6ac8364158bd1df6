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
 * Pure-state register of up to `kMaxQubits` qubits.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "navq/qsim/kernels.hpp"
#include "navq/rng.hpp"

namespace navq::qsim {

inline constexpr int kMaxQubits = 12;

/// Amplitude array of length 2^n. Qubit q is bit q of the basis index.
class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits; throws ConfigError outside [1, kMaxQubits].
    explicit StateVector(int n_qubits);

    /// Adopts `amps` as-is (not renormalized). Length must be a power of two.
    static StateVector from_amplitudes(std::vector<Complex> amps);

    [[nodiscard]] int num_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const;
    [[nodiscard]] double expectation_z(int qubit) const;

    void apply_rotation(Pauli axis, int target, double angle);
    void apply_cz(int control, int target);
    void apply_pauli(Pauli p, int target);

  private:
    StateVector() = default;
    void check_qubit(int q) const;

    int n_qubits_ = 0;
    std::vector<Complex> amps_;
};

/// exp(-i angle P / 2).
Mat2 rotation_matrix(Pauli axis, double angle);

/// Ground state |0...0>.
StateVector init_state(int n_qubits);

/// Expectation of Z on `qubit`; ConfigError if out of range.
double expectation_z(const StateVector &state, int qubit);

/// With probability `p` applies X, Y or Z (uniformly) to `qubit`.
/// Averaged over trajectories this realises the depolarizing channel
/// rho -> (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z).
/// Returns the Pauli applied, if any.
std::optional<Pauli> depolarize_step(StateVector &state, int qubit, double p,
                                     Rng &rng);

} // namespace navq::qsim
