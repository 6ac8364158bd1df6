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
#include "navq/env/geometry.hpp"

#include <algorithm>

namespace navq::env {

namespace {

// Point in the rectangle's local frame.
Vec2 to_local(const OrientedRect &r, Vec2 p) {
    const Vec2 d = p - r.center;
    return {d.dot(r.axis_u()), d.dot(r.axis_v())};
}

} // namespace

std::array<Vec2, 4> OrientedRect::corners() const {
    const Vec2 u = axis_u() * (length / 2);
    const Vec2 v = axis_v() * (width / 2);
    return {center + u + v, center - u + v, center - u - v, center + u - v};
}

double distance_to_rect(Vec2 p, const OrientedRect &r) {
    const Vec2 l = to_local(r, p);
    const double dx = std::max(std::abs(l.x) - r.length / 2, 0.0);
    const double dy = std::max(std::abs(l.y) - r.width / 2, 0.0);
    return std::hypot(dx, dy);
}

bool contains(const OrientedRect &r, Vec2 p) {
    const Vec2 l = to_local(r, p);
    return std::abs(l.x) <= r.length / 2 && std::abs(l.y) <= r.width / 2;
}

bool overlaps(const OrientedRect &a, const OrientedRect &b) {
    const auto ca = a.corners();
    const auto cb = b.corners();
    for (const Vec2 axis : {a.axis_u(), a.axis_v(), b.axis_u(), b.axis_v()}) {
        double amin = 1e300;
        double amax = -1e300;
        double bmin = 1e300;
        double bmax = -1e300;
        for (int i = 0; i < 4; ++i) {
            const double pa = ca[static_cast<std::size_t>(i)].dot(axis);
            const double pb = cb[static_cast<std::size_t>(i)].dot(axis);
            amin = std::min(amin, pa);
            amax = std::max(amax, pa);
            bmin = std::min(bmin, pb);
            bmax = std::max(bmax, pb);
        }
        if (amax < bmin || bmax < amin) {
            return false;
        }
    }
    return true;
}

bool segment_intersects(Vec2 a, Vec2 b, const OrientedRect &r) {
    // Liang-Barsky clip in the rectangle frame.
    const Vec2 la = to_local(r, a);
    const Vec2 lb = to_local(r, b);
    const Vec2 d = lb - la;
    double t0 = 0.0;
    double t1 = 1.0;
    const double hx = r.length / 2;
    const double hy = r.width / 2;
    const double p[4] = {-d.x, d.x, -d.y, d.y};
    const double q[4] = {la.x + hx, hx - la.x, la.y + hy, hy - la.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) {
                return false;
            }
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
        if (t0 > t1) {
            return false;
        }
    }
    return true;
}

} // namespace navq::env
