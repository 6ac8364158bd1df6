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
#include "navq/qsim/kernels.hpp"

#include <cstdint>

namespace navq::qsim::kernels::serial {

namespace {

// Index of the k-th amplitude whose bit `target` is 0.
inline std::size_t insert_zero(std::size_t k, int target) {
    const std::size_t low = (std::size_t{1} << target) - 1;
    return ((k & ~low) << 1U) | (k & low);
}

} // namespace

void apply_1q(std::span<Complex> amps, int target, const Mat2 &m) {
    const std::size_t half = amps.size() / 2;
    const std::size_t stride = std::size_t{1} << target;
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero(k, target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = m[0] * a0 + m[1] * a1;
        amps[i1] = m[2] * a0 + m[3] * a1;
    }
}

void apply_cz(std::span<Complex> amps, int control, int target) {
    const std::size_t mask =
        (std::size_t{1} << control) | (std::size_t{1} << target);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) == mask) {
            amps[i] = -amps[i];
        }
    }
}

void apply_pauli(std::span<Complex> amps, int target, Pauli p) {
    const std::size_t half = amps.size() / 2;
    const std::size_t stride = std::size_t{1} << target;
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero(k, target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        switch (p) {
        case Pauli::X:
            amps[i0] = a1;
            amps[i1] = a0;
            break;
        case Pauli::Y:
            amps[i0] = Complex{0.0, -1.0} * a1;
            amps[i1] = Complex{0.0, 1.0} * a0;
            break;
        case Pauli::Z:
            amps[i1] = -a1;
            break;
        }
    }
}

double norm_sq(std::span<const Complex> amps) {
    double s = 0.0;
    for (const auto &a : amps) {
        s += std::norm(a);
    }
    return s;
}

double expectation_z(std::span<const Complex> amps, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    double s = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double pr = std::norm(amps[i]);
        s += (i & bit) ? -pr : pr;
    }
    return s;
}

Complex inner_pauli(std::span<const Complex> lhs, std::span<const Complex> rhs,
                    int target, Pauli p) {
    const std::size_t half = lhs.size() / 2;
    const std::size_t stride = std::size_t{1} << target;
    Complex s{0.0, 0.0};
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero(k, target);
        const std::size_t i1 = i0 | stride;
        const Complex r0 = rhs[i0];
        const Complex r1 = rhs[i1];
        Complex p0;
        Complex p1;
        switch (p) {
        case Pauli::X:
            p0 = r1;
            p1 = r0;
            break;
        case Pauli::Y:
            p0 = Complex{0.0, -1.0} * r1;
            p1 = Complex{0.0, 1.0} * r0;
            break;
        case Pauli::Z:
        default:
            p0 = r0;
            p1 = -r1;
            break;
        }
        s += std::conj(lhs[i0]) * p0 + std::conj(lhs[i1]) * p1;
    }
    return s;
}

} // namespace navq::qsim::kernels::serial
