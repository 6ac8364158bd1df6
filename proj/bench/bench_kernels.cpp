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
#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "navq/qidep.hpp"
#include "navq/qsim/circuit.hpp"
#include "navq/qsim/kernels.hpp"
#include "navq/rng.hpp"

namespace {

using navq::qsim::Complex;
using navq::qsim::Mat2;
namespace k = navq::qsim::kernels;

std::vector<Complex> random_state(int qubits) {
    navq::Rng rng(7);
    std::vector<Complex> amps(std::size_t{1} << qubits);
    for (auto &a : amps) {
        a = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
    return amps;
}

const Mat2 kRy = [] {
    const double c = std::cos(0.3), s = std::sin(0.3);
    return Mat2{Complex{c}, Complex{-s}, Complex{s}, Complex{c}};
}();

template <void (*Apply)(std::span<Complex>, int, const Mat2 &)>
void BM_apply_1q(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    auto amps = random_state(n);
    int target = 0;
    for (auto _ : state) {
        Apply(amps, target, kRy);
        target = (target + 1) % n;
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <void (*Apply)(std::span<Complex>, int, int)>
void BM_apply_cz(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    auto amps = random_state(n);
    for (auto _ : state) {
        Apply(amps, 0, n - 1);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <double (*Expect)(std::span<const Complex>, int)>
void BM_expectation_z(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto amps = random_state(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Expect(amps, n / 2));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

BENCHMARK_TEMPLATE(BM_apply_1q, k::serial::apply_1q)->DenseRange(10, 20, 5);
BENCHMARK_TEMPLATE(BM_apply_1q, k::parallel::apply_1q)->DenseRange(10, 20, 5);
BENCHMARK_TEMPLATE(BM_apply_cz, k::serial::apply_cz)->DenseRange(10, 20, 5);
BENCHMARK_TEMPLATE(BM_apply_cz, k::parallel::apply_cz)->DenseRange(10, 20, 5);
BENCHMARK_TEMPLATE(BM_expectation_z, k::serial::expectation_z)->DenseRange(10, 20, 5);
BENCHMARK_TEMPLATE(BM_expectation_z, k::parallel::expectation_z)->DenseRange(10, 20, 5);

// Critic-sized circuit gradients: range(0) = qubits, range(1) = layers.
struct CriticCircuit {
    navq::qidep::QidepLayout layout;
    navq::qsim::Circuit circuit;
    std::vector<double> x, theta, w;

    CriticCircuit(int n, int L)
        : layout(navq::qidep::plan_layout(32, n, L)),
          circuit(navq::qidep::build_circuit(layout)) {
        navq::Rng rng(3);
        x.resize(static_cast<std::size_t>(layout.padded_dim()));
        theta.resize(static_cast<std::size_t>(layout.pqc_param_count));
        w.assign(static_cast<std::size_t>(n), 1.0);
        for (auto &v : x) v = rng.uniform(-1.0, 1.0);
        for (auto &v : theta) v = rng.uniform(-M_PI, M_PI);
    }
};

void BM_adjoint_gradient(benchmark::State &state) {
    CriticCircuit c(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    navq::Rng rng(1);
    const navq::qsim::NoiseSpec noise;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            navq::qsim::adjoint_gradient(c.circuit, c.x, c.theta, {c.w, 0.0}, noise, rng));
    }
}

void BM_param_shift_gradient(benchmark::State &state) {
    CriticCircuit c(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    navq::Rng rng(1);
    const navq::qsim::NoiseSpec noise;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            navq::qsim::param_shift_gradient(c.circuit, c.x, c.theta, {c.w, 0.0}, noise, rng));
    }
}

BENCHMARK(BM_adjoint_gradient)->Args({2, 1})->Args({4, 2})->Args({6, 3});
BENCHMARK(BM_param_shift_gradient)->Args({2, 1})->Args({4, 2})->Args({6, 3});

} // namespace

BENCHMARK_MAIN();
