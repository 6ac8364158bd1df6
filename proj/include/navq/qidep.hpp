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
 * Qubit-independent data encoding with re-uploading.
 *
 * A p-dimensional input is zero-padded to 3nk entries and cut into k
 * slices of 3n features, k = ceil(p / 3n). Every layer walks through all k
 * slices; each (layer, slice) pair is a sublayer made of an angle-encoding
 * block (three rotations per qubit) followed by a trainable block (RY, RZ
 * per qubit and a CZ chain). Only the trainable block owns parameters, so
 * a circuit has L * k * 2n of them.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "navq/qsim/circuit.hpp"

namespace navq::qidep {

/// Axis order of the three encoding rotations on each qubit.
enum class EncodingOrder { ZYZ, XYZ };

struct SublayerSpec {
    int layer = 0;    ///< 0-based
    int sublayer = 0; ///< 0-based
    std::size_t feature_begin = 0;
    std::size_t feature_end = 0;
    std::size_t param_begin = 0;
    std::size_t param_end = 0;
};

struct QidepLayout {
    int p = 0;
    int n = 0;
    int L = 0;
    int k = 0;
    int pad_len = 0;
    int pqc_param_count = 0;
    EncodingOrder order = EncodingOrder::ZYZ;

    [[nodiscard]] int padded_dim() const noexcept { return 3 * n * k; }
    /// Parameters of the n -> 1 linear readout.
    [[nodiscard]] int readout_param_count() const noexcept { return n + 1; }
    [[nodiscard]] int critic_param_count() const noexcept {
        return pqc_param_count + readout_param_count();
    }
    /// Index into theta of the RY (rot = 0) or RZ (rot = 1) angle.
    [[nodiscard]] std::size_t param_index(int layer, int sublayer, int qubit,
                                          int rot) const;
    [[nodiscard]] SublayerSpec sublayer(int layer, int sublayer) const;
};

/// ConfigError if any argument is < 1 or n exceeds the simulator limit.
QidepLayout plan_layout(int p, int n, int L, EncodingOrder order = EncodingOrder::ZYZ);

/// Gate sequence of the layout; data sources index the padded input.
qsim::Circuit build_circuit(const QidepLayout &layout);

/// `x` followed by pad_len zeros. InputError if |x| != p.
std::vector<double> pad_input(std::span<const double> x, const QidepLayout &layout);

void to_json(nlohmann::json &j, const QidepLayout &layout);

} // namespace navq::qidep
