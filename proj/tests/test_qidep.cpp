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
#include <map>
#include <vector>

#include "doctest.h"

#include <nlohmann/json.hpp>

#include "navq/error.hpp"
#include "navq/qidep.hpp"

using namespace navq;
using namespace navq::qidep;
using qsim::AngleSource;
using qsim::GateKind;

TEST_CASE("plan_layout examples") {
    auto a = plan_layout(32, 4, 1);
    CHECK(a.k == 3);
    CHECK(a.pad_len == 4);
    CHECK(a.pqc_param_count == 24);
    CHECK(a.critic_param_count() == 29);

    auto b = plan_layout(24, 4, 3);
    CHECK(b.k == 2);
    CHECK(b.pad_len == 0);

    auto c = plan_layout(6, 2, 1);
    CHECK(c.k == 1);
    CHECK(c.pad_len == 0);
    CHECK(c.pqc_param_count == 4);
    CHECK(c.critic_param_count() == 7);

    CHECK_THROWS_AS(plan_layout(0, 4, 1), ConfigError);
    CHECK_THROWS_AS(plan_layout(32, 0, 1), ConfigError);
    CHECK_THROWS_AS(plan_layout(32, 4, 0), ConfigError);
}

TEST_CASE("critic parameter counts for p = 32") {
    const std::map<std::pair<int, int>, int> table{
        {{4, 1}, 29}, {{4, 2}, 53}, {{4, 3}, 77},
        {{6, 1}, 31}, {{6, 2}, 55}, {{6, 3}, 79}};
    for (const auto &[key, total] : table) {
        CHECK(plan_layout(32, key.first, key.second).critic_param_count() == total);
    }
}

TEST_CASE("layout invariants over a grid") {
    for (int p = 1; p <= 40; ++p) {
        for (int n = 1; n <= 6; ++n) {
            for (int L = 1; L <= 3; ++L) {
                const auto lay = plan_layout(p, n, L);
                CHECK(lay.k == (p + 3 * n - 1) / (3 * n));
                CHECK(lay.pad_len >= 0);
                CHECK(lay.pad_len < 3 * n);
                CHECK(lay.pad_len == 3 * n * lay.k - p);
                CHECK(lay.pqc_param_count == L * lay.k * 2 * n);
            }
        }
    }
}

TEST_CASE("build_circuit structure") {
    const auto small = build_circuit(plan_layout(6, 2, 1));
    CHECK(small.gates.size() == 11);
    CHECK(small.sublayer_ends == std::vector<std::size_t>{11});
    CHECK(small.gates[0].kind == GateKind::RZ);
    CHECK(small.gates[1].kind == GateKind::RY);
    CHECK(small.gates[2].kind == GateKind::RZ);
    CHECK(small.gates[10].kind == GateKind::CZ);
    CHECK(*small.gates[10].control == 0);
    CHECK(small.gates[10].target == 1);

    const auto xyz = build_circuit(plan_layout(6, 2, 1, EncodingOrder::XYZ));
    CHECK(xyz.gates[0].kind == GateKind::RX);

    SUBCASE("deterministic") {
        const auto lay = plan_layout(32, 4, 2);
        CHECK(build_circuit(lay).gates == build_circuit(lay).gates);
    }
}

TEST_CASE("feature and parameter coverage") {
    for (auto [p, n, L] : {std::tuple{32, 4, 1}, std::tuple{32, 6, 3},
                           std::tuple{24, 4, 3}, std::tuple{7, 3, 2}}) {
        const auto lay = plan_layout(p, n, L);
        const auto c = build_circuit(lay);
        std::vector<int> feat(static_cast<std::size_t>(lay.padded_dim()), 0);
        std::vector<int> par(static_cast<std::size_t>(lay.pqc_param_count), 0);
        for (const auto &g : c.gates) {
            if (!g.source) {
                continue;
            }
            if (g.source->kind == AngleSource::Kind::Data) {
                ++feat.at(g.source->index);
            } else {
                ++par.at(g.source->index);
            }
        }
        for (int f : feat) {
            CHECK(f == L);
        }
        for (int v : par) {
            CHECK(v == 1);
        }
        CHECK(c.sublayer_ends.size() == static_cast<std::size_t>(L * lay.k));
        // Every sublayer's slice tiles the padded vector.
        for (int m = 0; m < lay.k; ++m) {
            const auto s = lay.sublayer(0, m);
            CHECK(s.feature_end - s.feature_begin == static_cast<std::size_t>(3 * n));
            CHECK(s.param_end - s.param_begin == static_cast<std::size_t>(2 * n));
        }
    }
}

TEST_CASE("pad_input") {
    const auto lay = plan_layout(32, 4, 1);
    std::vector<double> x(32, 0.5);
    const auto padded = pad_input(x, lay);
    REQUIRE(padded.size() == 36);
    for (std::size_t i = 32; i < 36; ++i) {
        CHECK(padded[i] == 0.0);
    }
    const auto lay0 = plan_layout(24, 4, 3);
    std::vector<double> y(24);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 0.1 * static_cast<double>(i);
    }
    CHECK(pad_input(y, lay0) == y);
    CHECK(pad_input(std::vector<double>(32, 0.0), lay) == std::vector<double>(36, 0.0));
    CHECK_THROWS_AS(pad_input(std::vector<double>(31, 0.0), lay), InputError);
}

TEST_CASE("layout JSON summary") {
    nlohmann::json j = plan_layout(32, 4, 2);
    CHECK(j["p"] == 32);
    CHECK(j["n"] == 4);
    CHECK(j["L"] == 2);
    CHECK(j["k"] == 3);
    CHECK(j["pad_len"] == 4);
    CHECK(j["pqc_param_count"] == 48);
}
