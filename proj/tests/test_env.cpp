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
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"

#include <nlohmann/json.hpp>

#include "navq/env/cost_map.hpp"
#include "navq/env/geometry.hpp"
#include "navq/env/planner.hpp"
#include "navq/env/scene.hpp"
#include "navq/env/world.hpp"
#include "navq/error.hpp"
#include "navq/rng.hpp"

using namespace navq;
using namespace navq::env;

namespace {

constexpr double kPi = std::numbers::pi;

Action random_action(Rng &rng) {
    return {static_cast<Acc>(rng.index(3)), steering_bin_rad(static_cast<int>(rng.index(5)))};
}

Scene empty_road() {
    Scene s = make_scene(1, 0.0, 1.0);
    s.pedestrians.clear();
    return s;
}

} // namespace

TEST_CASE("geometry") {
    const OrientedRect r{{0, 0}, 0.0, 4.0, 2.0};
    CHECK(distance_to_rect({0, 0}, r) == 0.0);
    CHECK(distance_to_rect({5, 0}, r) == doctest::Approx(3.0));
    CHECK(distance_to_rect({3, 2}, r) == doctest::Approx(std::sqrt(2.0)));
    const OrientedRect rot{{0, 0}, kPi / 2, 4.0, 2.0};
    CHECK(distance_to_rect({0, 3}, rot) == doctest::Approx(1.0));
    CHECK(contains(rot, {0.0, 1.9}));
    CHECK_FALSE(contains(rot, {1.9, 0.0}));

    CHECK(overlaps(r, {{3.9, 0}, 0.0, 4.0, 2.0}));
    CHECK_FALSE(overlaps(r, {{4.1, 0}, 0.0, 4.0, 2.0}));
    // Diamond just outside the corner.
    CHECK_FALSE(overlaps(r, {{3.0, 2.0}, kPi / 4, 1.0, 1.0}));
    CHECK(overlaps(r, {{2.2, 1.2}, kPi / 4, 1.0, 1.0}));

    CHECK(segment_intersects({-5, 0}, {5, 0}, r));
    CHECK(segment_intersects({-5, -5}, {5, 5}, r));
    CHECK_FALSE(segment_intersects({-5, 2}, {5, 2}, r));
    CHECK_FALSE(segment_intersects({3, 0}, {5, 0}, r));
    CHECK(segment_intersects({0, 0}, {0, 0.1}, r));

    CHECK(wrap_two_pi(-0.1) == doctest::Approx(2 * kPi - 0.1));
    CHECK(wrap_two_pi(2 * kPi) == 0.0);
    CHECK(wrap_two_pi(-1e-300) < 2 * kPi);
    CHECK(wrap_pi(1.5 * kPi) == doctest::Approx(-0.5 * kPi));
}

TEST_CASE("cost map") {
    const Scene s = empty_road();
    const CostMap map = build_cost_map(s);
    EnvConfig cfg;
    CarState car;
    car.p = {20, -1.75};
    CHECK(map.footprint_cost(car_rect(car, cfg)) == kRoadCost);
    car.p = {20, -3.0};
    CHECK(map.footprint_cost(car_rect(car, cfg)) == kSidewalkCost);
    car.p = {20, -7.0};
    CHECK(map.footprint_cost(car_rect(car, cfg)) == kCollisionCost);
    CHECK(map.cost_at({-1000, 0}) == kCollisionCost);

    std::stringstream ss;
    map.save(ss);
    const CostMap back = CostMap::load(ss);
    REQUIRE(back.cols() == map.cols());
    REQUIRE(back.rows() == map.rows());
    CHECK(back.resolution() == map.resolution());
    CHECK(back.origin() == map.origin());
    for (int r = 0; r < map.rows(); ++r) {
        for (int c = 0; c < map.cols(); ++c) {
            REQUIRE(back.at(c, r) == map.at(c, r));
        }
    }

    std::istringstream small("#resolution 2\n# origin 1 -1\n1 2 3\n4 5 6\n");
    const CostMap m = CostMap::load(small);
    CHECK(m.cols() == 3);
    CHECK(m.rows() == 2);
    CHECK(m.at(0, 1) == 1); // first text row is the top row
    CHECK(m.at(2, 0) == 6);
    CHECK(m.cost_at({2.0, 2.0}) == 1);

    std::istringstream ragged("1 2\n3\n");
    CHECK_THROWS_AS(CostMap::load(ragged), InputError);
    std::istringstream bad("1 x\n");
    CHECK_THROWS_AS(CostMap::load(bad), InputError);
    std::istringstream empty("# resolution 1\n");
    CHECK_THROWS_AS(CostMap::load(empty), InputError);
}

TEST_CASE("plan_path") {
    SUBCASE("straight road needs no steering") {
        const Scene s = empty_road();
        const CostMap map = build_cost_map(s);
        PlannerConfig cfg;
        const auto path = plan_path(map, s.car_start, s.car_goal, cfg);
        REQUIRE_FALSE(path.empty());
        for (double a : path.steering) {
            CHECK(a == 0.0);
        }
        for (const auto &p : path.poses) {
            CHECK(track_steering(path, p, 5.0, cfg) == 0.0);
            CHECK(cross_track_error(path, p.position()) == doctest::Approx(0.0));
        }
        CHECK(path.cost == doctest::Approx(path_cost(map, path.poses, path.steering, cfg)));
    }
    SUBCASE("start at goal") {
        const CostMap map(10, 10, 1.0, {0, 0});
        const auto path = plan_path(map, {5, 5, 0}, {5.2, 5});
        CHECK(path.empty());
        CHECK(path.cost == 0.0);
        CHECK(track_steering(path, {5, 5, 0}, 3.0, PlannerConfig{}) == 0.0);
    }
    SUBCASE("single blocked cell forces a detour") {
        CostMap map(40, 21, 1.0, {0, 0});
        map.set(18, 10, kCollisionCost);
        PlannerConfig cfg;
        cfg.footprint_length = 0.0;
        cfg.footprint_width = 0.0;
        cfg.wheelbase = 1.0;
        const Pose start{2.5, 10.5, 0.0};
        const Vec2 goal{36.5, 10.5};
        const auto path = plan_path(map, start, goal, cfg);
        REQUIRE_FALSE(path.empty());
        for (const auto &p : path.poses) {
            CHECK(map.cost_at(p.position()) < kCollisionCost);
        }
        bool steered = false;
        for (double a : path.steering) {
            steered = steered || a != 0.0;
        }
        CHECK(steered);

        // Straight line through the blocked cell, scored the same way.
        std::vector<Pose> line{start};
        std::vector<double> zeros;
        while ((line.back().position() - goal).norm() > cfg.goal_tolerance) {
            line.push_back(bicycle_advance(line.back(), cfg.step_length, 0.0, cfg.wheelbase));
            zeros.push_back(0.0);
        }
        const double straight = path_cost(map, line, zeros, cfg);
        CHECK(straight >= 99.0);
        CHECK(path.cost < straight);
        CHECK(path.cost == doctest::Approx(path_cost(map, path.poses, path.steering, cfg)));
    }
    SUBCASE("wall makes the goal unreachable") {
        CostMap map(30, 10, 1.0, {0, 0});
        for (int r = 0; r < 10; ++r) {
            map.set(15, r, kCollisionCost);
        }
        PlannerConfig cfg;
        cfg.footprint_length = 0.0;
        cfg.footprint_width = 0.0;
        cfg.max_expansions = 20000;
        CHECK_THROWS_AS(plan_path(map, {2.5, 5.5, 0}, {27.5, 5.5}, cfg), PlanningError);
        CHECK_THROWS_AS(plan_path(map, {2.5, 5.5, 0}, {100, 5.5}, cfg), PlanningError);
    }
}

TEST_CASE("generate_scenes") {
    const auto train = generate_scenes(Split::Train);
    CHECK(train.size() == 3690);
    std::map<int, int> per;
    for (const auto &s : train) {
        per[s.scenario_id]++;
    }
    CHECK(per.size() == 6);
    for (auto [id, count] : per) {
        CHECK(count == 615);
    }
    CHECK(per.count(2) == 0);
    CHECK(per.count(7) == 0);
    for (std::size_t i = 0; i < train.size(); ++i) {
        REQUIRE(train[i].id == static_cast<int>(i));
    }
    CHECK(train.front().ped_speed == doctest::Approx(0.6));
    CHECK(train.back().ped_speed == doctest::Approx(2.0));
    CHECK(train.back().ped_distance == doctest::Approx(40.0));

    SceneGridConfig one;
    one.scenarios = {3};
    one.speed_min = one.speed_max = 1.2;
    one.distance_min = one.distance_max = 7.0;
    const auto single = generate_scenes(one);
    REQUIRE(single.size() == 1);
    CHECK(single[0].static_obstacles.size() == 1);

    SceneGridConfig empty = one;
    empty.scenarios.clear();
    CHECK_THROWS_AS(generate_scenes(empty), ConfigError);
    SceneGridConfig inverted = one;
    inverted.speed_max = 0.5;
    CHECK_THROWS_AS(generate_scenes(inverted), ConfigError);
    CHECK_THROWS_AS(make_scene(9, 0, 1), ConfigError);
    CHECK_THROWS_AS(make_scene(0, 0, 1), ConfigError);

    const auto test = generate_scenes(Split::Test);
    CHECK(test.size() == 8u * 27u * 45u);

    std::stringstream ss;
    write_jsonl(ss, train);
    const auto back = read_jsonl(ss);
    REQUIRE(back.size() == train.size());
    CHECK(to_json(back[1234]) == to_json(train[1234]));
    std::istringstream junk("{not json}\n");
    CHECK_THROWS_AS(read_jsonl(junk), InputError);
}

TEST_CASE("reset") {
    Environment env;
    const Scene s = make_scene(1, 5.0, 1.0);
    const auto o1 = env.reset(s);
    CHECK(env.state().car.v == 0.0);
    CHECK(env.state().step == 0);
    CHECK(env.state().car.p == s.car_start.position());
    CHECK(o1.peds.size() == 4);
    CHECK(o1.peds[0].visible);
    CHECK_FALSE(o1.peds[1].visible);
    const auto o2 = env.reset(s);
    CHECK(to_json(o1) == to_json(o2));

    Scene far = s;
    far.pedestrians[0].start = {60.0, 0.0};
    far.pedestrians[0].goal = {60.0, 5.0};
    const auto o3 = env.reset(far);
    for (const auto &p : o3.peds) {
        CHECK_FALSE(p.visible);
    }

    Scene blocked = s;
    blocked.static_obstacles.push_back({{50, 0}, 0.0, 2.0, 20.0});
    EnvConfig small_budget;
    small_budget.planner.max_expansions = 20000;
    Environment limited(small_budget);
    CHECK_THROWS_AS(limited.reset(blocked), SceneError);
}

TEST_CASE("step") {
    Environment env;
    env.reset(empty_road());
    const Vec2 p0 = env.state().car.p;
    env.step({Acc::Maintain, 0.0});
    CHECK(env.state().car.p == p0);

    env.reset(empty_road());
    env.step({Acc::Accelerate, 0.0});
    CHECK(env.state().car.v == doctest::Approx(5.0 / 3.6).epsilon(1e-12));
    CHECK(env.state().car.v == doctest::Approx(1.389).epsilon(1e-3));
    CHECK(env.state().car.p.x == doctest::Approx(5.0 / 3.6 * 0.1));
    env.step({Acc::Decelerate, 0.0});
    env.step({Acc::Decelerate, 0.0});
    CHECK(env.state().car.v == 0.0);

    // Hard speed clamp.
    env.reset(empty_road());
    for (int i = 0; i < 20; ++i) {
        env.step({Acc::Accelerate, 0.0});
    }
    CHECK(env.state().car.v == doctest::Approx(60.0 / 3.6));

    env.reset(empty_road());
    int steps = 0;
    StepResult r;
    do {
        r = env.step({Acc::Maintain, 0.0});
        ++steps;
    } while (!r.done);
    CHECK(steps == 500);
    CHECK(r.outcome == Outcome::Timeout);
    CHECK_THROWS_AS(env.step({Acc::Maintain, 0.0}), UsageError);

    Environment fresh;
    CHECK_THROWS_AS(fresh.step({Acc::Maintain, 0.0}), UsageError);
}

TEST_CASE("driving the planned path reaches the goal") {
    Environment env;
    env.reset(empty_road());
    StepResult r;
    int steps = 0;
    do {
        const Acc acc = env.state().car.v < 30.0 / 3.6 ? Acc::Accelerate : Acc::Maintain;
        r = env.step({acc, env.planner_steering()});
        ++steps;
    } while (!r.done);
    CHECK(r.outcome == Outcome::Goal);
    CHECK(r.reward.goal == 200.0);
    CHECK(r.reward.not_goal == 0.0);
    CHECK(steps < 200);
}

TEST_CASE("compute_reward") {
    EnvConfig cfg;
    Environment env(cfg);
    env.reset(empty_road());
    WorldState s = env.state();

    const auto idle = compute_reward(s, {Acc::Decelerate, steering_bin_rad(3)}, cfg);
    CHECK(idle.braking == -1.0);
    CHECK(idle.steer == -1.0);
    CHECK(idle.not_goal == doctest::Approx(-0.1));
    CHECK(idle.total() == doctest::Approx(-2.1).epsilon(1e-12));

    WorldState goal = s;
    goal.car.p = goal.car.goal;
    const auto g = compute_reward(goal, {Acc::Maintain, 0.0}, cfg);
    CHECK(g.goal == 200.0);
    CHECK(g.total() == 200.0);

    WorldState crash = s;
    crash.car.p = {40, -1.75};
    crash.car.v = 50.0 / 3.6;
    crash.prev_speed = crash.car.v;
    crash.peds.push_back({{40, -1.75}, {40, 5}, 1.0, kPi / 2});
    const auto c = compute_reward(crash, {Acc::Maintain, 0.0}, cfg);
    CHECK(c.hit == doctest::Approx(-100.0).epsilon(1e-12));
    CHECK(c.obstacle == -1.0);
    CHECK(c.near_miss == 0.0);
    CHECK(c.over_speeding == 0.0);

    WorldState fast = s;
    fast.car.v = 55.0 / 3.6;
    CHECK(compute_reward(fast, {Acc::Maintain, 0.0}, cfg).over_speeding == -10.0);
    fast.car.v = 50.0 / 3.6;
    CHECK(compute_reward(fast, {Acc::Maintain, 0.0}, cfg).over_speeding == 0.0);

    WorldState close = s;
    close.car.v = 3.0;
    close.peds.push_back({{0.0, -1.75 + 1.0 + 1.0}, {0, 5}, 1.0, kPi / 2});
    const auto n = compute_reward(close, {Acc::Maintain, 0.0}, cfg);
    CHECK(n.near_miss == -10.0);
    CHECK(n.hit == 0.0);
}

TEST_CASE("check_proximity") {
    EnvConfig cfg;
    WorldState s;
    s.car.p = {0, 0};
    s.car.v = 2.0;
    s.peds.push_back({{30, 0}, {30, 5}, 1.0, 0.0});
    s.peds.push_back({{0, 0}, {0, 5}, 1.0, 0.0});
    s.peds.push_back({{0, 2.0}, {0, 5}, 1.0, 0.0}); // 1.0 m from the side
    const auto p = check_proximity(s, cfg);
    CHECK(p[0] == Proximity::Clear);
    CHECK(p[1] == Proximity::Hit);
    CHECK(p[2] == Proximity::NearMiss);
    s.car.v = 0.0;
    CHECK(check_proximity(s, cfg)[2] == Proximity::Clear);
}

TEST_CASE("parked car occludes the pedestrian") {
    Environment env;
    const Scene s = make_scene(3, 20.0, 1.0);
    const auto obs = env.reset(s);
    CHECK_FALSE(obs.peds[0].visible);
    const Scene open = make_scene(1, 20.0, 1.0);
    CHECK(env.reset(open).peds[0].visible);
}

TEST_CASE("stationary car is never walked into") {
    Environment env;
    Scene s = make_scene(1, 0.0, 2.0);
    s.pedestrians[0].start = {0.0, -5.0};
    s.pedestrians[0].goal = {0.0, 5.0};
    env.reset(s);
    StepResult r;
    for (int i = 0; i < 100 && !r.done; ++i) {
        r = env.step({Acc::Maintain, 0.0});
        CHECK(r.proximity[0] != Proximity::Hit);
    }
}

TEST_CASE("property: random rollouts keep state invariants") {
    const auto scenes = generate_scenes(Split::Train);
    Rng pick(77);
    Environment env;
    for (int ep = 0; ep < 30; ++ep) {
        const Scene &scene = scenes[pick.index(scenes.size())];
        env.reset(scene);
        Environment twin = env;
        Rng rng(static_cast<std::uint64_t>(ep));
        StepResult r;
        int steps = 0;
        do {
            const Action a = random_action(rng);
            r = env.step(a);
            const StepResult t = twin.step(a);
            ++steps;
            REQUIRE(t.reward.total() == r.reward.total());
            REQUIRE(twin.state().car.p == env.state().car.p);
            const auto &car = env.state().car;
            REQUIRE(car.v >= 0.0);
            REQUIRE(car.heading >= 0.0);
            REQUIRE(car.heading < 2 * kPi);
            const auto &b = r.reward;
            REQUIRE(b.total() == b.goal + b.hit + b.obstacle + b.near_miss + b.over_speeding +
                                     b.not_goal + b.braking + b.steer);
            REQUIRE(r.obs.flatten().size() == Observation::flat_size(4));
            const auto j = to_json(r.obs);
            for (const auto &ped : j.at("pedestrians")) {
                std::set<std::string> keys;
                for (auto it = ped.begin(); it != ped.end(); ++it) {
                    keys.insert(it.key());
                }
                REQUIRE(keys == std::set<std::string>{"rel_pos", "rel_vel", "visible"});
            }
        } while (!r.done);
        CHECK(steps <= 500);
    }
}
