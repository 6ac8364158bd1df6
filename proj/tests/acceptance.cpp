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
 * Acceptance suite. Prints one PASS/FAIL line per criterion followed by
 * indented detail lines, and exits non-zero if any criterion fails.
 *
 *   navq_acceptance            run everything
 *   navq_acceptance 3 9        run the listed criteria only
 */
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "navq/agent/a2c.hpp"
#include "navq/agent/evaluate.hpp"
#include "navq/analysis/curves.hpp"
#include "navq/analysis/fim.hpp"
#include "navq/cli/commands.hpp"
#include "navq/env/scene.hpp"
#include "navq/env/world.hpp"
#include "navq/qidep.hpp"
#include "navq/qsim/circuit.hpp"
#include "navq/qsim/state_vector.hpp"
#include "navq/rng.hpp"
#include "support/density_matrix.hpp"
#include "support/nn_checks.hpp"
#include "support/random_circuits.hpp"
#include "support/temp_dir.hpp"

using namespace navq;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

/// Collects detail lines and the verdict of one criterion.
class Report {
  public:
    template <class... Args>
    void note(fmt::format_string<Args...> f, Args &&...args) {
        lines_.push_back(fmt::format(f, std::forward<Args>(args)...));
    }
    template <class... Args>
    void check(bool ok, fmt::format_string<Args...> f, Args &&...args) {
        lines_.push_back(fmt::format("[{}] ", ok ? "ok" : "FAILED") +
                         fmt::format(f, std::forward<Args>(args)...));
        pass_ = pass_ && ok;
    }
    [[nodiscard]] bool pass() const { return pass_; }
    [[nodiscard]] const std::vector<std::string> &lines() const { return lines_; }

  private:
    bool pass_ = true;
    std::vector<std::string> lines_;
};

// Shared desk-scale setup: scenario 1, 5 speeds x 10 distances.
std::vector<env::Scene> desk_scenes() {
    env::SceneGridConfig g;
    g.scenarios = {1};
    g.speed_min = 0.6;
    g.speed_max = 2.0;
    g.speed_step = 0.35;
    g.distance_min = 0.0;
    g.distance_max = 36.0;
    g.distance_step = 4.0;
    return env::generate_scenes(g);
}

agent::AgentConfig desk_agent(agent::CriticKind kind, std::uint64_t seed) {
    agent::AgentConfig c;
    c.critic = kind;
    c.episodes = 300;
    c.seed = seed;
    if (kind == agent::CriticKind::Quantum) {
        c.quantum.n_qubits = 2;
        c.quantum.layers = 1;
        c.model.lstm_hidden = 6;
    }
    return c;
}

const char *label(agent::CriticKind k) {
    return k == agent::CriticKind::Quantum ? "quantum n=2 L=1" : "classical";
}

// ---------------------------------------------------------------------------

void param_counts(Report &r) {
    const int expected[2][3] = {{29, 53, 77}, {31, 55, 79}};
    const int qubits[2] = {4, 6};
    for (int i = 0; i < 2; ++i) {
        for (int L = 1; L <= 3; ++L) {
            const auto layout = qidep::plan_layout(32, qubits[i], L);
            const auto circuit_params =
                static_cast<int>(qidep::build_circuit(layout).num_params());
            agent::QuantumCriticConfig qc;
            qc.n_qubits = qubits[i];
            qc.layers = L;
            const agent::QuantumCritic critic(32, qc);
            const int want = expected[i][L - 1];
            r.check(layout.critic_param_count() == want &&
                        circuit_params + layout.readout_param_count() == want &&
                        static_cast<int>(critic.param_count()) == want,
                    "n={} L={}: layout {}, circuit+readout {}, critic {} (want {})", qubits[i], L,
                    layout.critic_param_count(), circuit_params + layout.readout_param_count(),
                    critic.param_count(), want);
        }
    }
    const agent::ClassicalCritic classical(32, 64);
    r.check(classical.param_count() == 2305, "classical critic {} (want 2305)",
            classical.param_count());
}

void scene_grid(Report &r) {
    const auto scenes = env::generate_scenes(env::Split::Train);
    std::set<int> scenarios;
    std::set<int> ids;
    for (const auto &s : scenes) {
        scenarios.insert(s.scenario_id);
        ids.insert(s.id);
    }
    const auto g = env::SceneGridConfig::defaults(env::Split::Train);
    const auto speeds = env::grid_values(g.speed_min, g.speed_max, g.speed_step).size();
    const auto dists = env::grid_values(g.distance_min, g.distance_max, g.distance_step).size();
    r.check(scenes.size() == 3690, "train grid has {} scenes (want 3690)", scenes.size());
    r.check(scenarios.size() == 6 && speeds == 15 && dists == 41,
            "{} scenarios x {} speeds x {} distances", scenarios.size(), speeds, dists);
    r.check(ids.size() == scenes.size(), "scene ids unique");
}

void simulator(Report &r) {
    Rng rng(20260101);

    double worst_norm = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.index(8));
        qsim::StateVector s(n);
        for (int g = 0; g < 100; ++g) {
            const int q = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
            if (rng.index(4) == 3 && n > 1) {
                s.apply_cz(q, (q + 1) % n);
            } else {
                s.apply_rotation(static_cast<qsim::Pauli>(rng.index(3)), q, rng.uniform(-10, 10));
            }
            worst_norm = std::max(worst_norm, std::abs(s.norm() - 1.0));
        }
    }
    r.check(worst_norm <= 1e-12, "(a) max |norm - 1| over 200 sequences x 100 gates: {:.3g}",
            worst_norm);

    double worst_ry = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double theta = rng.uniform(-2 * kPi, 2 * kPi);
        qsim::StateVector s(1);
        s.apply_rotation(qsim::Pauli::Y, 0, theta);
        worst_ry = std::max(worst_ry, std::abs(s.expectation_z(0) - std::cos(theta)));
    }
    r.check(worst_ry <= 1e-12, "(b) max |<Z> - cos theta| after RY over 1000 angles: {:.3g}",
            worst_ry);

    double worst_ps_fd = 0.0;
    double worst_adj_fd = 0.0;
    double worst_ps_adj = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.index(4));
        const int L = 1 + static_cast<int>(rng.index(2));
        const int p = 1 + static_cast<int>(rng.index(16));
        const auto layout = qidep::plan_layout(p, n, L);
        const auto c = qidep::build_circuit(layout);
        const auto x = qidep::pad_input(testing::random_vector(rng, static_cast<std::size_t>(p),
                                                               -kPi, kPi),
                                        layout);
        const auto theta = testing::random_vector(
            rng, static_cast<std::size_t>(layout.pqc_param_count), -kPi, kPi);
        const auto w = testing::random_vector(rng, static_cast<std::size_t>(n), -1.5, 1.5);
        const qsim::Readout ro{w, rng.uniform(-1, 1)};

        auto value = [&](const std::vector<double> &th) {
            return qsim::readout_value(ro, qsim::run_circuit(c, x, th));
        };
        const auto fd = testing::central_difference(value, theta, 1e-5);
        Rng unused(0);
        const auto ps = qsim::param_shift_gradient(c, x, theta, ro, qsim::NoiseSpec{}, unused);
        const auto adj = qsim::adjoint_gradient(c, x, theta, ro, qsim::NoiseSpec{}, unused);
        for (std::size_t k = 0; k < theta.size(); ++k) {
            worst_ps_fd = std::max(worst_ps_fd, std::abs(ps.d_params[k] - fd[k]));
            worst_adj_fd = std::max(worst_adj_fd, std::abs(adj.d_params[k] - fd[k]));
            worst_ps_adj = std::max(worst_ps_adj, std::abs(ps.d_params[k] - adj.d_params[k]));
        }
    }
    r.check(worst_ps_fd <= 1e-6 && worst_adj_fd <= 1e-6 && worst_ps_adj <= 1e-6,
            "(c) 100 random QIDEP circuits: max |ps - fd| {:.3g}, |adjoint - fd| {:.3g}, "
            "|ps - adjoint| {:.3g}",
            worst_ps_fd, worst_adj_fd, worst_ps_adj);
}

void noise_channel(Report &r) {
    constexpr int kTrajectories = 10000;
    Rng rng(4242);
    for (const int n : {1, 2}) {
        const auto layout = qidep::plan_layout(3 * n, n, 1);
        const auto c = qidep::build_circuit(layout);
        const auto x = testing::random_vector(rng, static_cast<std::size_t>(3 * n), -kPi, kPi);
        const auto th = testing::random_vector(
            rng, static_cast<std::size_t>(layout.pqc_param_count), -kPi, kPi);

        testing::DensityMatrix clean(n);
        const char enc[] = {'Z', 'Y', 'Z'};
        for (int q = 0; q < n; ++q) {
            for (int a = 0; a < 3; ++a) {
                clean.rotate(enc[a], q, x[static_cast<std::size_t>(3 * q + a)]);
            }
        }
        for (int q = 0; q < n; ++q) {
            clean.rotate('Y', q, th[static_cast<std::size_t>(2 * q)]);
            clean.rotate('Z', q, th[static_cast<std::size_t>(2 * q + 1)]);
        }
        if (n == 2) {
            clean.cz();
        }

        for (const double p : {0.1, 0.5, 1.0}) {
            testing::DensityMatrix dm = clean;
            for (int q = 0; q < n; ++q) {
                dm.depolarize(q, p);
            }
            qsim::NoiseSpec noise;
            noise.depolarizing_p = p;
            std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
            std::vector<double> sum_sq(static_cast<std::size_t>(n), 0.0);
            for (int t = 0; t < kTrajectories; ++t) {
                const auto z = qsim::run_circuit(c, x, th, noise, rng);
                for (std::size_t q = 0; q < z.size(); ++q) {
                    sum[q] += z[q];
                    sum_sq[q] += z[q] * z[q];
                }
            }
            for (int q = 0; q < n; ++q) {
                const auto qi = static_cast<std::size_t>(q);
                const double mean = sum[qi] / kTrajectories;
                const double var = std::max(0.0, sum_sq[qi] / kTrajectories - mean * mean);
                const double se = std::sqrt(var / kTrajectories);
                const double oracle = dm.expectation_z(q);
                const double closed = (1.0 - 4.0 * p / 3.0) * clean.expectation_z(q);
                r.check(std::abs(oracle - closed) <= 1e-12 &&
                            std::abs(mean - oracle) <= 3 * se + 1e-12,
                        "{}q p={:.1f} qubit {}: trajectory mean {:+.5f} (se {:.5f}), "
                        "oracle {:+.5f}, (1-4p/3)<Z> {:+.5f}",
                        n, p, q, mean, se, oracle, closed);
            }
        }
    }
}

void reward_branches(Report &r) {
    const env::EnvConfig cfg;
    env::Environment world(cfg);
    env::Scene road = env::make_scene(1, 0.0, 1.0);
    road.pedestrians.clear();
    world.reset(road);
    const env::WorldState base = world.state();
    const env::Action straight{env::Acc::Maintain, 0.0};

    env::WorldState goal = base;
    goal.car.p = goal.car.goal;
    r.check(env::compute_reward(goal, straight, cfg).goal == 200.0, "goal reached: +200");

    env::WorldState fast = base;
    fast.car.v = 55.0 * env::kKmhToMs;
    r.check(env::compute_reward(fast, straight, cfg).over_speeding == -10.0,
            "over speed limit: -10");

    env::WorldState near = base;
    near.car.v = 3.0;
    const double clearance = cfg.car_width / 2 + cfg.ped_radius + cfg.near_miss_margin / 2;
    near.peds.push_back({{base.car.p.x, base.car.p.y + clearance}, {base.car.p.x, 5.0}, 1.0,
                         kPi / 2});
    const auto nm = env::compute_reward(near, straight, cfg);
    r.check(nm.near_miss == -10.0 && nm.hit == 0.0, "near miss: -10 (got {})", nm.near_miss);

    const auto idle = env::compute_reward(base, {env::Acc::Decelerate, 0.0}, cfg);
    r.check(idle.braking == -1.0, "decelerating while stopped: -1");

    const auto turn = env::compute_reward(base, {env::Acc::Maintain, env::steering_bin_rad(3)},
                                          cfg);
    r.check(turn.steer == -1.0, "non-zero steering: -1");

    const double dist = std::hypot(base.car.p.x - base.car.goal.x, base.car.p.y - base.car.goal.y);
    r.check(std::abs(idle.not_goal + dist / 1000.0) <= 1e-15,
            "not at goal: -goal_dist/1000 = {:.6f} (got {:.6f})", -dist / 1000.0, idle.not_goal);

    for (const double kmh : {50.0, 25.0}) {
        env::WorldState crash = base;
        crash.car.p = {40, base.car.p.y};
        crash.car.v = kmh * env::kKmhToMs;
        crash.prev_speed = crash.car.v;
        crash.peds.push_back({crash.car.p, {40, 5}, 1.0, kPi / 2});
        const auto c = env::compute_reward(crash, straight, cfg);
        const double beta = kmh / 50.0;
        r.check(std::abs(c.hit + 100.0 * beta) <= 1e-12, "pedestrian hit at {} km/h: -100 * {} = {}",
                kmh, beta, c.hit);
        const double cost = crash.map->footprint_cost(env::car_rect(crash.car, cfg));
        r.check(c.obstacle == -cost && cost > 0,
                "obstacle inside hit area: -obstacleCost = {} (got {})", -cost, c.obstacle);
    }
}

void nn_gradients(Report &r) {
    Rng rng(1618);
    double dense = 0.0, ln = 0.0, lstm = 0.0, softmax = 0.0;
    for (int i = 0; i < 50; ++i) {
        dense = std::max(dense, testing::check_dense_tanh(rng));
        ln = std::max(ln, testing::check_layer_norm(rng));
        lstm = std::max(lstm, testing::check_lstm(rng));
        softmax = std::max(softmax, testing::check_softmax(rng));
    }
    r.check(dense < 1e-5, "dense+tanh, 50 shapes: max rel error {:.3g}", dense);
    r.check(ln < 1e-5, "layer norm, 50 shapes: max rel error {:.3g}", ln);
    r.check(lstm < 1e-5, "LSTM cell, 50 shapes: max rel error {:.3g}", lstm);
    r.check(softmax < 1e-5, "softmax/entropy, 50 shapes: max rel error {:.3g}", softmax);
}

void desk_learning(Report &r) {
    const auto scenes = desk_scenes();
    const env::EnvConfig ec;
    const auto random = agent::evaluate_policy(
        [] { return std::make_unique<agent::RandomPolicy>(0); }, scenes, ec);
    const double baseline = random.metrics.mean_return;
    r.note("{} scenes; random-policy mean return {:.2f}", scenes.size(), baseline);

    for (const auto kind : {agent::CriticKind::Quantum, agent::CriticKind::Classical}) {
        const auto cfg = desk_agent(kind, 0);
        double lo = 1e300, hi = -1e300;
        const auto res = agent::train_run(cfg, ec, scenes, [&](const agent::EpisodeRecord &e) {
            lo = std::min(lo, e.entropy);
            hi = std::max(hi, e.entropy);
        });
        const auto smoothed = analysis::smooth_curve(res.record.returns());
        const double first = analysis::window_mean(smoothed, 0, 50);
        const double last = analysis::window_mean(smoothed, smoothed.size() - 50, 50);
        r.check(last > first && last > baseline,
                "{} ({} critic params): smoothed return first 50 {:.2f} -> last 50 {:.2f}",
                label(kind), res.agent->critic().param_count(), first, last);
        r.check(lo >= 0.0 && hi <= std::log(3.0) + 1e-12,
                "{}: episode mean entropy in [{:.4f}, {:.4f}] within [0, log 3]", label(kind), lo,
                hi);
    }
}

void multi_seed(Report &r) {
    const auto scenes = desk_scenes();
    const env::EnvConfig ec;
    for (const auto kind : {agent::CriticKind::Quantum, agent::CriticKind::Classical}) {
        std::vector<std::vector<double>> runs;
        bool repeat_ok = true;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto cfg = desk_agent(kind, seed);
            auto a = agent::train_run(cfg, ec, scenes).record.returns();
            const auto b = agent::train_run(cfg, ec, scenes).record.returns();
            const double auc_a = analysis::auc(analysis::smooth_curve(a));
            const double auc_b = analysis::auc(analysis::smooth_curve(b));
            repeat_ok = repeat_ok && std::memcmp(&auc_a, &auc_b, sizeof(double)) == 0 && a == b;
            runs.push_back(std::move(a));
        }
        const auto stats = analysis::aggregate_runs(runs);
        r.note("{}: AUC per seed {:.2f} {:.2f} {:.2f}; mean {:.2f} std {:.2f}", label(kind),
               stats.run_auc[0], stats.run_auc[1], stats.run_auc[2], stats.auc_mean,
               stats.auc_std);
        r.check(stats.run_auc.size() == 3 && std::isfinite(stats.auc_mean) &&
                    std::isfinite(stats.auc_std) && !stats.truncated,
                "{}: aggregate over 3 seeds x {} episodes", label(kind), stats.length);
        r.check(repeat_ok, "{}: rerunning each seed reproduces returns and AUC bit for bit",
                label(kind));
    }
}

void capacity(Report &r) {
    const env::EnvConfig ec;
    const int obs_dim = static_cast<int>(env::Observation::flat_size(ec.k_nearest));
    agent::AgentConfig qcfg;
    qcfg.critic = agent::CriticKind::Quantum;
    agent::AgentConfig ccfg = qcfg;
    ccfg.critic = agent::CriticKind::Classical;
    agent::Agent qa(qcfg, obs_dim);
    agent::Agent ca(ccfg, obs_dim);
    qa.init();
    ca.init();

    analysis::FimConfig fc;
    const auto inputs = analysis::collect_hidden_states(qa, env::generate_scenes(env::Split::Train),
                                                        ec, fc.input_samples, 0);
    r.note("{} LSTM hidden states from rollouts; {} theta samples; gamma {}, n {}",
           inputs.size(), fc.theta_samples, fc.gamma, fc.n_data);

    std::vector<std::pair<std::string, double>> normalized;
    for (agent::Agent *a : {&qa, &ca}) {
        auto &critic = a->critic();
        const auto d = static_cast<Eigen::Index>(critic.param_count());
        const auto keep = critic.params().values();
        Rng rng = Rng::substream(fc.seed, "acceptance-fim");
        double worst_asym = 0.0;
        double worst_neg = 0.0;
        for (int s = 0; s < fc.theta_samples; ++s) {
            std::vector<double> theta(static_cast<std::size_t>(d));
            for (auto &t : theta) {
                t = rng.uniform(-critic.param_range(), critic.param_range());
            }
            const auto f = analysis::critic_fim_factor(critic, inputs, theta);
            const analysis::Mat dense = f.dense();
            worst_asym = std::max(worst_asym, (dense - dense.transpose()).cwiseAbs().maxCoeff());
            const auto ev = f.eigenvalues();
            worst_neg = std::min(worst_neg, ev.back() / std::max(1.0, ev.front()));
        }
        critic.params().set_values(keep);
        r.check(worst_asym == 0.0 && worst_neg >= -1e-12,
                "{} d={}: max |F - F^T| {:.3g}, min eigenvalue / max {:.3g}", critic.kind(), d,
                worst_asym, worst_neg);

        const auto rep = analysis::fim_report(critic, inputs, fc);
        r.check(rep.ed.ed > 0.0 && rep.ed.ed <= static_cast<double>(d) &&
                    rep.min_eigenvalue >= -1e-12 * std::max(1.0, rep.eigenvalues.front()),
                "{} d={}: ED {:.4f} in (0, d]", critic.kind(), d, rep.ed.ed);
        normalized.emplace_back(critic.kind(), rep.ed.normalized);
    }
    r.note("normalized ED side by side: {} {:.4f} | {} {:.4f} ({} is higher)",
           normalized[0].first, normalized[0].second, normalized[1].first, normalized[1].second,
           normalized[0].second > normalized[1].second ? normalized[0].first
                                                       : normalized[1].first);
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism(Report &r) {
    test::TempDir tmp;
    nlohmann::json cfg = {
        {"agent",
         {{"critic", "quantum"},
          {"quantum", {{"n_qubits", 2}, {"layers", 1}}},
          {"model", {{"lstm_hidden", 6}}},
          {"episodes", 100}}},
        {"scenes",
         {{"scenarios", {1}},
          {"speed", {{"min", 0.6}, {"max", 2.0}, {"step", 0.35}}},
          {"distance", {{"min", 0.0}, {"max", 36.0}, {"step", 4.0}}}}},
        {"seeds", {5}}};
    const auto path = tmp.path() / "config.json";
    std::ofstream(path) << cfg.dump(2);

    std::ostringstream log, err;
    std::vector<std::string> first;
    for (const auto &[name, noise] :
         std::vector<std::pair<std::string, std::string>>{
             {"noiseless", "none"}, {"noisy", "gate,depol=0.05,trajectories=2"}}) {
        std::vector<std::string> csv;
        for (const char *run : {"a", "b"}) {
            cli::TrainArgs args{path.string(), {}};
            args.overrides.out = (tmp.path() / (name + run)).string();
            args.overrides.noise = noise;
            const int rc = cli::cmd_train(args, log, err);
            csv.push_back(rc == cli::kExitOk ? slurp(tmp.path() / (name + run) / "seed_5" /
                                                     "curve.csv")
                                             : "rc " + std::to_string(rc));
        }
        r.check(!csv[0].empty() && csv[0].rfind("rc ", 0) != 0 && csv[0] == csv[1],
                "{} ({}): two cmd_train runs give byte-identical curve.csv ({} bytes)", name,
                noise, csv[0].size());
        first.push_back(csv[0]);
    }
    r.check(first[0] != first[1], "noise changes the curve");
    if (!err.str().empty()) {
        r.note("stderr: {}", err.str());
    }
}

struct Criterion {
    int id;
    const char *name;
    std::function<void(Report &)> run;
};

} // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> all = {
        {1, "parameter-count table", param_counts},
        {2, "scene grid", scene_grid},
        {3, "quantum simulator correctness", simulator},
        {4, "noise channel", noise_channel},
        {5, "reward branches", reward_branches},
        {6, "classical-net gradients", nn_gradients},
        {7, "desk-scale learning", desk_learning},
        {8, "multi-seed protocol", multi_seed},
        {9, "capacity analysis", capacity},
        {10, "end-to-end determinism", determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        only.insert(std::atoi(argv[i]));
    }

    int failed = 0;
    for (const auto &c : all) {
        if (!only.empty() && only.count(c.id) == 0) {
            continue;
        }
        Report rep;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(rep);
        } catch (const std::exception &e) {
            rep.check(false, "exception: {}", e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += rep.pass() ? 0 : 1;
        std::cout << fmt::format("{} criterion {:>2}: {} ({:.1f}s)\n",
                                 rep.pass() ? "PASS" : "FAIL", c.id, c.name, secs);
        for (const auto &l : rep.lines()) {
            std::cout << "      " << l << '\n';
        }
        std::cout.flush();
    }
    std::cout << fmt::format("{} criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
