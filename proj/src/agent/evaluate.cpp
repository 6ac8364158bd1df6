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
#include "navq/agent/evaluate.hpp"

#include <algorithm>
#include <exception>

#include <nlohmann/json.hpp>

#include "navq/agent/a2c.hpp"

namespace navq::agent {

using nlohmann::json;

void GreedyPolicy::reset(const env::Scene & /*scene*/) { state_ = agent_.initial_state(); }

env::Acc GreedyPolicy::act(const env::Observation &obs, const env::WorldState &state) {
    const Vec h = agent_.advance(observation_features(obs, cfg_),
                                 side_features(obs, state.car, cfg_), state_);
    return acc_from_index(select_action(agent_.actor_logits(h), nullptr).index);
}

void RandomPolicy::reset(const env::Scene &scene) {
    rng_ = Rng(derive_seed(seed_, {static_cast<std::uint64_t>(scene.id)}));
}

env::Acc RandomPolicy::act(const env::Observation &, const env::WorldState &) {
    return acc_from_index(static_cast<int>(rng_.index(env::kNumAcc)));
}

PolicyMetrics summarize(const std::vector<SceneOutcome> &outcomes, double dt, double threshold) {
    PolicyMetrics m;
    m.episodes = static_cast<int>(outcomes.size());
    struct Acc {
        int n = 0, crashes = 0, near = 0, goals = 0;
        double time = 0.0;
    };
    std::map<int, Acc> per;
    Acc all;
    double ret = 0.0;
    for (const auto &o : outcomes) {
        for (Acc *a : {&all, &per[o.scenario_id]}) {
            a->n++;
            a->crashes += o.outcome == env::Outcome::Collision;
            a->near += o.near_miss;
            if (o.outcome == env::Outcome::Goal) {
                a->goals++;
                a->time += o.steps * dt;
            }
        }
        ret += o.ret;
    }
    auto pct = [](int k, int n) { return n ? 100.0 * k / n : 0.0; };
    m.crash_rate = pct(all.crashes, all.n);
    m.near_miss_rate = pct(all.near, all.n);
    if (all.goals) {
        m.ttg = all.time / all.goals;
    }
    m.mean_return = all.n ? ret / all.n : 0.0;
    m.scenarios = static_cast<int>(per.size());
    for (const auto &[id, a] : per) {
        ScenarioStats s;
        s.episodes = a.n;
        s.crash_rate = pct(a.crashes, a.n);
        s.near_miss_rate = pct(a.near, a.n);
        if (a.goals) {
            s.ttg = a.time / a.goals;
        }
        if (s.crash_rate < threshold && s.near_miss_rate < threshold) {
            m.safety_index++;
        }
        m.per_scenario[id] = s;
    }
    return m;
}

EvalResult evaluate_policy(const PolicyFactory &factory, const std::vector<env::Scene> &scenes,
                           const env::EnvConfig &cfg) {
    EvalResult out;
    out.outcomes.resize(scenes.size());
    const auto n = static_cast<std::int64_t>(scenes.size());
    std::exception_ptr error;
#pragma omp parallel
    {
        env::Environment env(cfg);
        auto policy = factory();
#pragma omp for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                const auto &scene = scenes[static_cast<std::size_t>(i)];
                policy->reset(scene);
                env::Observation obs = env.reset(scene);
                SceneOutcome o;
                o.scene_id = scene.id;
                o.scenario_id = scene.scenario_id;
                bool done = false;
                while (!done) {
                    const env::Acc acc = policy->act(obs, env.state());
                    const auto res = env.step({acc, env.planner_steering()});
                    o.ret += res.reward.total();
                    o.near_miss = o.near_miss ||
                                  std::any_of(res.proximity.begin(), res.proximity.end(),
                                              [](env::Proximity p) {
                                                  return p == env::Proximity::NearMiss;
                                              });
                    obs = res.obs;
                    done = res.done;
                    o.outcome = res.outcome;
                }
                o.steps = env.state().step;
                o.time_s = o.steps * cfg.dt;
                out.outcomes[static_cast<std::size_t>(i)] = o;
            } catch (...) {
#pragma omp critical
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    out.metrics = summarize(out.outcomes, cfg.dt);
    return out;
}

EvalResult evaluate_agent(const Agent &agent, const std::vector<env::Scene> &scenes,
                          const env::EnvConfig &cfg) {
    return evaluate_policy([&] { return std::make_unique<GreedyPolicy>(agent, cfg); }, scenes,
                           cfg);
}

json to_json(const PolicyMetrics &m) {
    json per = json::object();
    for (const auto &[id, s] : m.per_scenario) {
        per[std::to_string(id)] = {{"episodes", s.episodes},
                                   {"crash_rate", s.crash_rate},
                                   {"near_miss_rate", s.near_miss_rate},
                                   {"ttg", s.ttg ? json(*s.ttg) : json(nullptr)}};
    }
    return {{"ttg", m.ttg ? json(*m.ttg) : json(nullptr)},
            {"crash_rate", m.crash_rate},
            {"near_miss_rate", m.near_miss_rate},
            {"safety_index", m.safety_index},
            {"scenarios", m.scenarios},
            {"mean_return", m.mean_return},
            {"episodes", m.episodes},
            {"per_scenario", per}};
}

} // namespace navq::agent
