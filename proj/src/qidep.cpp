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
#include "navq/qidep.hpp"

#include <algorithm>
#include <array>
#include <string>

#include <nlohmann/json.hpp>

#include "navq/error.hpp"

namespace navq::qidep {

using qsim::AngleSource;
using qsim::GateKind;
using qsim::GateOp;

std::size_t QidepLayout::param_index(int layer, int sublayer, int qubit,
                                     int rot) const {
    return static_cast<std::size_t>(((layer * k + sublayer) * n + qubit) * 2 + rot);
}

SublayerSpec QidepLayout::sublayer(int layer, int sublayer) const {
    require(layer >= 0 && layer < L && sublayer >= 0 && sublayer < k,
            "sublayer index out of range");
    SublayerSpec s;
    s.layer = layer;
    s.sublayer = sublayer;
    s.feature_begin = static_cast<std::size_t>(3 * n * sublayer);
    s.feature_end = static_cast<std::size_t>(3 * n * (sublayer + 1));
    s.param_begin = param_index(layer, sublayer, 0, 0);
    s.param_end = s.param_begin + static_cast<std::size_t>(2 * n);
    return s;
}

QidepLayout plan_layout(int p, int n, int L, EncodingOrder order) {
    require(p >= 1, "input dimension p must be >= 1, got " + std::to_string(p));
    require(n >= 1 && n <= qsim::kMaxQubits,
            "qubit count n must be in [1, " + std::to_string(qsim::kMaxQubits) +
                "], got " + std::to_string(n));
    require(L >= 1, "layer count L must be >= 1, got " + std::to_string(L));
    QidepLayout lay;
    lay.p = p;
    lay.n = n;
    lay.L = L;
    lay.k = (p + 3 * n - 1) / (3 * n);
    lay.pad_len = 3 * n * lay.k - p;
    lay.pqc_param_count = L * lay.k * 2 * n;
    lay.order = order;
    return lay;
}

qsim::Circuit build_circuit(const QidepLayout &layout) {
    const std::array<GateKind, 3> enc =
        layout.order == EncodingOrder::ZYZ
            ? std::array<GateKind, 3>{GateKind::RZ, GateKind::RY, GateKind::RZ}
            : std::array<GateKind, 3>{GateKind::RX, GateKind::RY, GateKind::RZ};

    qsim::Circuit c;
    c.n_qubits = layout.n;
    c.gates.reserve(static_cast<std::size_t>(layout.L * layout.k * (5 * layout.n)));
    for (int l = 0; l < layout.L; ++l) {
        for (int m = 0; m < layout.k; ++m) {
            const auto feat0 = static_cast<std::size_t>(3 * layout.n * m);
            for (int q = 0; q < layout.n; ++q) {
                for (int a = 0; a < 3; ++a) {
                    c.gates.push_back(GateOp::rotation(
                        enc[static_cast<std::size_t>(a)], q,
                        AngleSource::data(feat0 + static_cast<std::size_t>(3 * q + a))));
                }
            }
            for (int q = 0; q < layout.n; ++q) {
                c.gates.push_back(GateOp::rotation(
                    GateKind::RY, q, AngleSource::param(layout.param_index(l, m, q, 0))));
                c.gates.push_back(GateOp::rotation(
                    GateKind::RZ, q, AngleSource::param(layout.param_index(l, m, q, 1))));
            }
            for (int q = 0; q + 1 < layout.n; ++q) {
                c.gates.push_back(GateOp::cz(q, q + 1));
            }
            c.sublayer_ends.push_back(c.gates.size());
        }
    }
    return c;
}

std::vector<double> pad_input(std::span<const double> x, const QidepLayout &layout) {
    require<InputError>(x.size() == static_cast<std::size_t>(layout.p),
                        "input length " + std::to_string(x.size()) +
                            " does not match layout p=" + std::to_string(layout.p));
    std::vector<double> out(static_cast<std::size_t>(layout.padded_dim()), 0.0);
    std::copy(x.begin(), x.end(), out.begin());
    return out;
}

void to_json(nlohmann::json &j, const QidepLayout &layout) {
    j = nlohmann::json{{"p", layout.p},
                       {"n", layout.n},
                       {"L", layout.L},
                       {"k", layout.k},
                       {"pad_len", layout.pad_len},
                       {"pqc_param_count", layout.pqc_param_count},
                       {"critic_param_count", layout.critic_param_count()},
                       {"encoding_order",
                        layout.order == EncodingOrder::ZYZ ? "ZYZ" : "XYZ"}};
}

} // namespace navq::qidep
