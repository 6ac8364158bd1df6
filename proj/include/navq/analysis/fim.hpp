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
 * Empirical Fisher information and effective dimension of a value model.
 *
 * Under a unit-variance Gaussian output model the empirical Fisher at θ is
 *
 *   F(θ) = 1/k Σ_j ∇V(x_j; θ) ∇V(x_j; θ)ᵀ
 *
 * and is kept in factored form (the k×d gradient matrix) so that large
 * classical critics never materialize a d×d matrix.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "navq/agent/agent.hpp"
#include "navq/agent/critic.hpp"
#include "navq/env/scene.hpp"

namespace navq::analysis {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// F = gᵀg / k with g the k×d matrix of per-sample gradients.
struct FimFactor {
    Mat g;

    [[nodiscard]] Eigen::Index dim() const { return g.cols(); }
    [[nodiscard]] Eigen::Index samples() const { return g.rows(); }
    [[nodiscard]] Mat dense() const;
    [[nodiscard]] double trace() const;
    /// All d eigenvalues, descending. Computed on the smaller of the two
    /// Gram sides; the remaining eigenvalues are exactly zero.
    [[nodiscard]] std::vector<double> eigenvalues() const;
};

using GradFn = std::function<std::vector<double>(const Vec &)>;

/// UsageError on an empty input set.
FimFactor empirical_fim_factor(const GradFn &grad, std::span<const Vec> inputs);
Mat empirical_fim(const GradFn &grad, std::span<const Vec> inputs);

/// Sets the critic's parameters to `theta` and returns the factor of F(θ).
/// A configured noise model draws from derive_seed(noise_seed, {j}) for
/// sample j.
FimFactor critic_fim_factor(agent::Critic &critic, std::span<const Vec> inputs,
                            std::span<const double> theta, std::uint64_t noise_seed = 0);

/// Descending eigenvalues of a symmetric matrix; UsageError if not square.
std::vector<double> eigenspectrum(const Mat &f);

struct EffectiveDimension {
    double ed = 0.0;
    double normalized = 0.0;
    double kappa = 0.0;
};

/// Monte-Carlo effective dimension over θ samples:
///   F̄ = d F / mean_θ tr F,  κ = γ n / (2π ln n),
///   ED = 2 ln(mean_θ sqrt(det(I + κ F̄))) / ln κ.
/// ConfigError if κ <= 1 or γ outside (0, 1]; UsageError on fewer than two
/// samples or mismatched dimensions.
EffectiveDimension effective_dimension(std::span<const FimFactor> samples, double gamma,
                                       double n_data);
EffectiveDimension effective_dimension(std::span<const Mat> samples, double gamma, double n_data);
/// Same formula on samples that are already normalized (no trace rescaling).
double effective_dimension_normalized(std::span<const Mat> fbar, double kappa);

struct FimConfig {
    int theta_samples = 20;
    int input_samples = 200;
    double gamma = 1.0;
    double n_data = 3690;
    std::uint64_t seed = 0;
};

struct FIMReport {
    std::string model;
    int d = 0;
    int theta_samples = 0;
    int input_samples = 0;
    double gamma = 1.0;
    double n_data = 0.0;
    EffectiveDimension ed;
    /// Sorted spectra averaged rank-wise over θ samples.
    std::vector<double> eigenvalues;
    /// Smallest eigenvalue seen over all θ samples.
    double min_eigenvalue = 0.0;
    double mean_trace = 0.0;
};

/// θ ~ Uniform(-r, r)^d with r = critic.param_range(), drawn from the
/// "fim" substream of cfg.seed. The critic's own parameters are restored.
FIMReport fim_report(agent::Critic &critic, std::span<const Vec> inputs, const FimConfig &cfg);

/// Uniform(-1, 1)^dim inputs.
std::vector<Vec> uniform_inputs(int dim, int count, std::uint64_t seed);

/// LSTM states visited by the sampled policy of `agent`, rolling out scenes
/// in a seeded random order until 4 * count states are seen (or the scenes run out), then
/// `count` of them taken at even strides.
std::vector<Vec> collect_hidden_states(const agent::Agent &agent,
                                       const std::vector<env::Scene> &scenes,
                                       const env::EnvConfig &env_cfg, int count,
                                       std::uint64_t seed);

nlohmann::json to_json(const FIMReport &r);
/// "rank,eigenvalue" rows for the first `top` eigenvalues.
void write_eigenspectrum_csv(std::ostream &os, std::span<const double> eigenvalues,
                             std::size_t top = 50);

} // namespace navq::analysis
