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
#include "navq/analysis/fim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "navq/agent/a2c.hpp"
#include "navq/error.hpp"
#include "navq/rng.hpp"

namespace navq::analysis {

namespace {

// Smaller Gram side of F = gᵀg / k, scaled.
Mat gram(const Mat &g, double scale) {
    if (g.rows() < g.cols()) {
        return scale * (g * g.transpose());
    }
    return scale * (g.transpose() * g);
}

std::vector<double> descending(const Vec &ev) {
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

// log det(I + c A) for symmetric PSD A.
double log_det_identity_plus(const Mat &a, double c) {
    const Mat m = Mat::Identity(a.rows(), a.cols()) + c * a;
    Eigen::LLT<Mat> llt(m);
    if (llt.info() == Eigen::Success) {
        return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().array().max(std::numeric_limits<double>::min()).log().sum();
}

double kappa_of(double gamma, double n_data) {
    require(gamma > 0.0 && gamma <= 1.0, "effective dimension gamma must be in (0, 1]");
    require(n_data > 1.0, "effective dimension needs n_data > 1");
    const double kappa = gamma * n_data / (2.0 * std::numbers::pi * std::log(n_data));
    require(kappa > 1.0, "effective dimension: kappa = " + std::to_string(kappa) +
                             " <= 1; increase n_data or gamma");
    return kappa;
}

// Shared tail: given per-sample log det(I + κ F̄) and d.
EffectiveDimension finish(const std::vector<double> &log_dets, double kappa, double d) {
    const double hi = *std::max_element(log_dets.begin(), log_dets.end());
    double acc = 0.0;
    for (double l : log_dets) {
        acc += std::exp(0.5 * (l - hi));
    }
    const double log_mean = 0.5 * hi + std::log(acc / static_cast<double>(log_dets.size()));
    EffectiveDimension out;
    out.kappa = kappa;
    out.ed = 2.0 * log_mean / std::log(kappa);
    out.normalized = d > 0 ? out.ed / d : 0.0;
    return out;
}

} // namespace

Mat FimFactor::dense() const {
    Mat f = Mat::Zero(g.cols(), g.cols());
    f.selfadjointView<Eigen::Lower>().rankUpdate(
        g.transpose(), 1.0 / static_cast<double>(std::max<Eigen::Index>(g.rows(), 1)));
    return f.selfadjointView<Eigen::Lower>();
}

double FimFactor::trace() const {
    return g.squaredNorm() / static_cast<double>(std::max<Eigen::Index>(g.rows(), 1));
}

std::vector<double> FimFactor::eigenvalues() const {
    const double k = static_cast<double>(std::max<Eigen::Index>(g.rows(), 1));
    Eigen::SelfAdjointEigenSolver<Mat> es(gram(g, 1.0 / k), Eigen::EigenvaluesOnly);
    auto ev = descending(es.eigenvalues());
    ev.resize(static_cast<std::size_t>(g.cols()), 0.0);
    return ev;
}

FimFactor empirical_fim_factor(const GradFn &grad, std::span<const Vec> inputs) {
    require<UsageError>(!inputs.empty(), "empirical_fim: empty input set");
    FimFactor f;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        const auto gj = grad(inputs[j]);
        if (j == 0) {
            f.g.resize(static_cast<Eigen::Index>(inputs.size()),
                       static_cast<Eigen::Index>(gj.size()));
        }
        require<UsageError>(static_cast<Eigen::Index>(gj.size()) == f.g.cols(),
                            "empirical_fim: gradient length changed between samples");
        f.g.row(static_cast<Eigen::Index>(j)) =
            Eigen::Map<const Eigen::RowVectorXd>(gj.data(), f.g.cols());
    }
    return f;
}

Mat empirical_fim(const GradFn &grad, std::span<const Vec> inputs) {
    return empirical_fim_factor(grad, inputs).dense();
}

FimFactor critic_fim_factor(agent::Critic &critic, std::span<const Vec> inputs,
                            std::span<const double> theta, std::uint64_t noise_seed) {
    require<UsageError>(!inputs.empty(), "empirical_fim: empty input set");
    require<UsageError>(theta.size() == critic.param_count(),
                        "critic_fim: theta has the wrong length");
    critic.params().set_values(theta);
    FimFactor f;
    f.g.resize(static_cast<Eigen::Index>(inputs.size()),
               static_cast<Eigen::Index>(critic.param_count()));
    const auto n = static_cast<std::int64_t>(inputs.size());
    const agent::Critic &c = critic;
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
        Rng noise(derive_seed(noise_seed, {static_cast<std::uint64_t>(j)}));
        const auto g = c.value_and_grad(inputs[static_cast<std::size_t>(j)], noise);
        f.g.row(j) = Eigen::Map<const Eigen::RowVectorXd>(g.d_params.data(), f.g.cols());
    }
    return f;
}

std::vector<double> eigenspectrum(const Mat &f) {
    require<UsageError>(f.rows() == f.cols(), "eigenspectrum: matrix is not square");
    Eigen::SelfAdjointEigenSolver<Mat> es(f, Eigen::EigenvaluesOnly);
    return descending(es.eigenvalues());
}

EffectiveDimension effective_dimension(std::span<const FimFactor> samples, double gamma,
                                       double n_data) {
    const double kappa = kappa_of(gamma, n_data);
    require<UsageError>(samples.size() >= 2, "effective_dimension: need at least two samples");
    const auto d = samples.front().dim();
    double mean_trace = 0.0;
    for (const auto &s : samples) {
        require<UsageError>(s.dim() == d, "effective_dimension: dimension mismatch");
        mean_trace += s.trace();
    }
    mean_trace /= static_cast<double>(samples.size());
    if (mean_trace <= 0.0) {
        return {0.0, 0.0, kappa};
    }
    std::vector<double> log_dets;
    for (const auto &s : samples) {
        const double k = static_cast<double>(s.samples());
        const double c = kappa * static_cast<double>(d) / mean_trace / k;
        // det(I_d + c gᵀg) = det(I_k + c g gᵀ)
        log_dets.push_back(log_det_identity_plus(gram(s.g, 1.0), c));
    }
    return finish(log_dets, kappa, static_cast<double>(d));
}

EffectiveDimension effective_dimension(std::span<const Mat> samples, double gamma,
                                       double n_data) {
    const double kappa = kappa_of(gamma, n_data);
    require<UsageError>(samples.size() >= 2, "effective_dimension: need at least two samples");
    const auto d = samples.front().rows();
    double mean_trace = 0.0;
    for (const auto &s : samples) {
        require<UsageError>(s.rows() == d && s.cols() == d,
                            "effective_dimension: dimension mismatch");
        mean_trace += s.trace();
    }
    mean_trace /= static_cast<double>(samples.size());
    if (mean_trace <= 0.0) {
        return {0.0, 0.0, kappa};
    }
    std::vector<double> log_dets;
    for (const auto &s : samples) {
        log_dets.push_back(log_det_identity_plus(s, kappa * static_cast<double>(d) / mean_trace));
    }
    return finish(log_dets, kappa, static_cast<double>(d));
}

double effective_dimension_normalized(std::span<const Mat> fbar, double kappa) {
    require(kappa > 1.0, "effective dimension: kappa must be > 1");
    require<UsageError>(!fbar.empty(), "effective_dimension: no samples");
    std::vector<double> log_dets;
    for (const auto &s : fbar) {
        require<UsageError>(s.rows() == s.cols(), "effective_dimension: matrix is not square");
        log_dets.push_back(log_det_identity_plus(s, kappa));
    }
    return finish(log_dets, kappa, static_cast<double>(fbar.front().rows())).ed;
}

std::vector<Vec> uniform_inputs(int dim, int count, std::uint64_t seed) {
    require(dim >= 1 && count >= 1, "uniform_inputs: dim and count must be >= 1");
    Rng rng(seed);
    std::vector<Vec> out(static_cast<std::size_t>(count), Vec(dim));
    for (auto &x : out) {
        for (auto &v : x) {
            v = rng.uniform(-1.0, 1.0);
        }
    }
    return out;
}

std::vector<Vec> collect_hidden_states(const agent::Agent &agent,
                                       const std::vector<env::Scene> &scenes,
                                       const env::EnvConfig &env_cfg, int count,
                                       std::uint64_t seed) {
    require(count >= 1, "collect_hidden_states: count must be >= 1");
    require(!scenes.empty(), "collect_hidden_states: no scenes");
    Rng rng(seed);
    env::Environment env(env_cfg);
    std::vector<std::size_t> order(scenes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(i)]);
    }
    std::vector<Vec> all;
    const auto want = static_cast<std::size_t>(4 * count);
    for (std::size_t idx : order) {
        const auto r = agent::rollout_episode(agent, env, scenes[idx], rng);
        auto state = agent.initial_state();
        for (int t = 0; t < r.steps(); ++t) {
            all.push_back(agent.advance(r.features[static_cast<std::size_t>(t)],
                                        r.side[static_cast<std::size_t>(t)], state));
        }
        if (all.size() >= want) {
            break;
        }
    }
    std::vector<Vec> out;
    const auto n = static_cast<std::size_t>(count);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(all[i * all.size() / n]);
    }
    return out;
}

FIMReport fim_report(agent::Critic &critic, std::span<const Vec> inputs, const FimConfig &cfg) {
    require(cfg.theta_samples >= 2, "fim: theta_samples must be >= 2");
    require<UsageError>(!inputs.empty(), "fim: empty input set");
    const auto saved = critic.params().values();
    const std::size_t d = saved.size();
    const double r = critic.param_range();
    Rng rng = Rng::substream(cfg.seed, "fim");
    const std::uint64_t noise_base = substream_seed(cfg.seed, "fim-noise");

    std::vector<FimFactor> factors;
    FIMReport rep;
    rep.model = critic.kind();
    rep.d = static_cast<int>(d);
    rep.theta_samples = cfg.theta_samples;
    rep.input_samples = static_cast<int>(inputs.size());
    rep.gamma = cfg.gamma;
    rep.n_data = cfg.n_data;
    rep.eigenvalues.assign(d, 0.0);
    rep.min_eigenvalue = std::numeric_limits<double>::infinity();
    std::vector<double> theta(d);
    for (int s = 0; s < cfg.theta_samples; ++s) {
        for (auto &t : theta) {
            t = rng.uniform(-r, r);
        }
        factors.push_back(critic_fim_factor(critic, inputs, theta,
                                            derive_seed(noise_base, {static_cast<std::uint64_t>(s)})));
        const auto ev = factors.back().eigenvalues();
        for (std::size_t i = 0; i < d; ++i) {
            rep.eigenvalues[i] += ev[i] / cfg.theta_samples;
        }
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, ev.back());
        rep.mean_trace += factors.back().trace() / cfg.theta_samples;
    }
    critic.params().set_values(saved);
    rep.ed = effective_dimension(factors, cfg.gamma, cfg.n_data);
    return rep;
}

nlohmann::json to_json(const FIMReport &r) {
    const std::size_t top = std::min<std::size_t>(50, r.eigenvalues.size());
    return {{"model", r.model},
            {"d", r.d},
            {"theta_samples", r.theta_samples},
            {"input_samples", r.input_samples},
            {"gamma", r.gamma},
            {"n_data", r.n_data},
            {"kappa", r.ed.kappa},
            {"effective_dimension", r.ed.ed},
            {"normalized_effective_dimension", r.ed.normalized},
            {"min_eigenvalue", r.min_eigenvalue},
            {"mean_trace", r.mean_trace},
            {"eigenvalues_top50",
             std::vector<double>(r.eigenvalues.begin(),
                                 r.eigenvalues.begin() + static_cast<std::ptrdiff_t>(top))}};
}

void write_eigenspectrum_csv(std::ostream &os, std::span<const double> eigenvalues,
                             std::size_t top) {
    os << "rank,eigenvalue\n";
    for (std::size_t i = 0; i < std::min(top, eigenvalues.size()); ++i) {
        os << fmt::format("{},{:.17g}\n", i + 1, eigenvalues[i]);
    }
}

} // namespace navq::analysis
