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
#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace navq::env {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    [[nodiscard]] double dot(Vec2 o) const { return x * o.x + y * o.y; }
    [[nodiscard]] double cross(Vec2 o) const { return x * o.y - y * o.x; }
    [[nodiscard]] double norm() const { return std::hypot(x, y); }
    bool operator==(const Vec2 &) const = default;
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0; ///< radians
    [[nodiscard]] Vec2 position() const { return {x, y}; }
    bool operator==(const Pose &) const = default;
};

/// Wraps an angle to [0, 2 pi).
inline double wrap_two_pi(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a < 0.0) {
        a += two_pi;
    }
    // fmod of a tiny negative value can round back up to exactly 2 pi.
    return a >= two_pi ? 0.0 : a;
}

/// Wraps an angle to (-pi, pi].
inline double wrap_pi(double a) {
    a = wrap_two_pi(a);
    return a > std::numbers::pi ? a - 2.0 * std::numbers::pi : a;
}

/// Rectangle centred at `center`, rotated by `heading`; `length` runs along
/// the heading direction.
struct OrientedRect {
    Vec2 center;
    double heading = 0.0;
    double length = 0.0;
    double width = 0.0;

    [[nodiscard]] Vec2 axis_u() const { return {std::cos(heading), std::sin(heading)}; }
    [[nodiscard]] Vec2 axis_v() const { return {-std::sin(heading), std::cos(heading)}; }
    [[nodiscard]] std::array<Vec2, 4> corners() const;
    [[nodiscard]] OrientedRect inflated(double margin) const {
        return {center, heading, length + 2 * margin, width + 2 * margin};
    }
};

/// Euclidean distance from `p` to the rectangle (0 inside).
double distance_to_rect(Vec2 p, const OrientedRect &r);

bool contains(const OrientedRect &r, Vec2 p);

/// Separating-axis overlap test.
bool overlaps(const OrientedRect &a, const OrientedRect &b);

/// True if segment [a, b] touches the rectangle.
bool segment_intersects(Vec2 a, Vec2 b, const OrientedRect &r);

} // namespace navq::env
