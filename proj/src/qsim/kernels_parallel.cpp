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

#include <algorithm>
#include <array>
#include <cstdint>

namespace navq::qsim::kernels::parallel {

namespace {

inline std::size_t insert_zero(std::size_t k, int target) {
    const std::size_t low = (std::size_t{1} << target) - 1;
    return ((k & ~low) << 1U) | (k & low);
}

// Splits [0, n) into kReductionBlocks contiguous ranges, evaluates `body`
// on each range in parallel, then sums the partials in block order.
template <class T, class Body> T blocked_sum(std::size_t n, Body body) {
    std::array<T, kReductionBlocks> partial{};
    const auto nblocks = static_cast<std::int64_t>(kReductionBlocks);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = n * static_cast<std::size_t>(b) / kReductionBlocks;
        const std::size_t hi =
            n * static_cast<std::size_t>(b + 1) / kReductionBlocks;
        partial[static_cast<std::size_t>(b)] = body(lo, hi);
    }
    T total{};
    for (const auto &p : partial) {
        total += p;
    }
    return total;
}

} // namespace

void apply_1q(std::span<Complex> amps, int target, const Mat2 &m) {
    const auto half = static_cast<std::int64_t>(amps.size() / 2);
    const std::size_t stride = std::size_t{1} << target;
    Complex *a = amps.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero(static_cast<std::size_t>(k), target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = a[i0];
        const Complex a1 = a[i1];
        a[i0] = m[0] * a0 + m[1] * a1;
        a[i1] = m[2] * a0 + m[3] * a1;
    }
}

void apply_cz(std::span<Complex> amps, int control, int target) {
    // Enumerate only the quarter of indices with both bits set.
    const int lo_bit = std::min(control, target);
    const int hi_bit = std::max(control, target);
    const auto quarter = static_cast<std::int64_t>(amps.size() / 4);
    const std::size_t mask =
        (std::size_t{1} << control) | (std::size_t{1} << target);
    Complex *a = amps.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < quarter; ++k) {
        const std::size_t i =
            insert_zero(insert_zero(static_cast<std::size_t>(k), lo_bit), hi_bit) |
            mask;
        a[i] = -a[i];
    }
}

void apply_pauli(std::span<Complex> amps, int target, Pauli p) {
    const auto half = static_cast<std::int64_t>(amps.size() / 2);
    const std::size_t stride = std::size_t{1} << target;
    Complex *a = amps.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero(static_cast<std::size_t>(k), target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = a[i0];
        const Complex a1 = a[i1];
        switch (p) {
        case Pauli::X:
            a[i0] = a1;
            a[i1] = a0;
            break;
        case Pauli::Y:
            a[i0] = Complex{0.0, -1.0} * a1;
            a[i1] = Complex{0.0, 1.0} * a0;
            break;
        case Pauli::Z:
            a[i1] = -a1;
            break;
        }
    }
}

double norm_sq(std::span<const Complex> amps) {
    return blocked_sum<double>(amps.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += std::norm(amps[i]);
        }
        return s;
    });
}

double expectation_z(std::span<const Complex> amps, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    return blocked_sum<double>(amps.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double pr = std::norm(amps[i]);
            s += (i & bit) ? -pr : pr;
        }
        return s;
    });
}

Complex inner_pauli(std::span<const Complex> lhs, std::span<const Complex> rhs,
                    int target, Pauli p) {
    const std::size_t stride = std::size_t{1} << target;
    return blocked_sum<Complex>(
        lhs.size() / 2, [&](std::size_t lo, std::size_t hi) {
            Complex s{0.0, 0.0};
            for (std::size_t k = lo; k < hi; ++k) {
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
        });
}

} // namespace navq::qsim::kernels::parallel
