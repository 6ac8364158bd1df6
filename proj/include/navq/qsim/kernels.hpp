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
 * Amplitude-array kernels.
 *
 * Two interchangeable implementations are provided. `serial` is the
 * reference and is what the unit tests treat as ground truth; `parallel`
 * distributes the amplitude loop with OpenMP. Reductions in `parallel`
 * use a fixed block decomposition, so results do not depend on the thread
 * count. The unqualified functions in `navq::qsim::kernels` dispatch on
 * state size.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>

namespace navq::qsim {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<Complex, 4>;

enum class Pauli { X, Y, Z };

namespace kernels {

/// Below this many amplitudes the dispatching kernels stay serial.
inline constexpr std::size_t kParallelMinDim = std::size_t{1} << 10U;

/// Number of reduction blocks used by the parallel kernels.
inline constexpr std::size_t kReductionBlocks = 64;

namespace serial {
void apply_1q(std::span<Complex> amps, int target, const Mat2 &m);
void apply_cz(std::span<Complex> amps, int control, int target);
void apply_pauli(std::span<Complex> amps, int target, Pauli p);
double norm_sq(std::span<const Complex> amps);
/// <Z_q>, computed from probabilities.
double expectation_z(std::span<const Complex> amps, int qubit);
/// <lhs| P_target |rhs>.
Complex inner_pauli(std::span<const Complex> lhs, std::span<const Complex> rhs,
                    int target, Pauli p);
} // namespace serial

namespace parallel {
void apply_1q(std::span<Complex> amps, int target, const Mat2 &m);
void apply_cz(std::span<Complex> amps, int control, int target);
void apply_pauli(std::span<Complex> amps, int target, Pauli p);
double norm_sq(std::span<const Complex> amps);
double expectation_z(std::span<const Complex> amps, int qubit);
Complex inner_pauli(std::span<const Complex> lhs, std::span<const Complex> rhs,
                    int target, Pauli p);
} // namespace parallel

inline bool use_parallel(std::size_t dim) { return dim >= kParallelMinDim; }

inline void apply_1q(std::span<Complex> amps, int target, const Mat2 &m) {
    use_parallel(amps.size()) ? parallel::apply_1q(amps, target, m)
                              : serial::apply_1q(amps, target, m);
}
inline void apply_cz(std::span<Complex> amps, int control, int target) {
    use_parallel(amps.size()) ? parallel::apply_cz(amps, control, target)
                              : serial::apply_cz(amps, control, target);
}
inline void apply_pauli(std::span<Complex> amps, int target, Pauli p) {
    use_parallel(amps.size()) ? parallel::apply_pauli(amps, target, p)
                              : serial::apply_pauli(amps, target, p);
}
inline double norm_sq(std::span<const Complex> amps) {
    return use_parallel(amps.size()) ? parallel::norm_sq(amps)
                                     : serial::norm_sq(amps);
}
inline double expectation_z(std::span<const Complex> amps, int qubit) {
    return use_parallel(amps.size()) ? parallel::expectation_z(amps, qubit)
                                     : serial::expectation_z(amps, qubit);
}
inline Complex inner_pauli(std::span<const Complex> lhs,
                           std::span<const Complex> rhs, int target, Pauli p) {
    return use_parallel(lhs.size()) ? parallel::inner_pauli(lhs, rhs, target, p)
                                    : serial::inner_pauli(lhs, rhs, target, p);
}

} // namespace kernels
} // namespace navq::qsim
