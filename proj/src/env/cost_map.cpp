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
#include "navq/env/cost_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "navq/error.hpp"

namespace navq::env {

namespace {

// Keeps footprint samples strictly inside the rectangle so an edge lying
// on a cell boundary does not read the neighbouring cell.
constexpr double kEdgeInset = 1e-9;

} // namespace

CostMap::CostMap(int cols, int rows, double resolution, Vec2 origin, int fill)
    : cols_(cols), rows_(rows), resolution_(resolution), origin_(origin) {
    require(cols > 0 && rows > 0, "cost map must have at least one cell");
    require(resolution > 0.0, "cost map resolution must be positive");
    require(fill >= 0, "cost map costs must be non-negative");
    cells_.assign(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows), fill);
}

int CostMap::at(int col, int row) const {
    if (!in_bounds(col, row)) {
        return kCollisionCost;
    }
    return cells_[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(col)];
}

void CostMap::set(int col, int row, int cost) {
    require<InputError>(in_bounds(col, row), "cost map cell out of range");
    require<InputError>(cost >= 0, "cost map costs must be non-negative");
    cells_[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(col)] = cost;
}

int CostMap::cost_at(Vec2 p) const {
    const auto col = static_cast<int>(std::floor((p.x - origin_.x) / resolution_));
    const auto row = static_cast<int>(std::floor((p.y - origin_.y) / resolution_));
    return at(col, row);
}

bool CostMap::contains_point(Vec2 p) const {
    return p.x >= origin_.x && p.y >= origin_.y && p.x < origin_.x + cols_ * resolution_ &&
           p.y < origin_.y + rows_ * resolution_;
}

void CostMap::paint(const OrientedRect &r, int cost) {
    for (int row = 0; row < rows_; ++row) {
        for (int col = 0; col < cols_; ++col) {
            const Vec2 c{origin_.x + (col + 0.5) * resolution_,
                         origin_.y + (row + 0.5) * resolution_};
            if (contains(r, c) && at(col, row) < cost) {
                set(col, row, cost);
            }
        }
    }
}

void CostMap::paint_band(double ymin, double ymax, int cost) {
    for (int row = 0; row < rows_; ++row) {
        const double y = origin_.y + (row + 0.5) * resolution_;
        if (y < ymin || y >= ymax) {
            continue;
        }
        for (int col = 0; col < cols_; ++col) {
            if (at(col, row) < cost) {
                set(col, row, cost);
            }
        }
    }
}

int CostMap::footprint_cost(const OrientedRect &r) const {
    if (r.length <= 0.0 || r.width <= 0.0) {
        return cost_at(r.center);
    }
    const double step = resolution_ / 2;
    const int nu = static_cast<int>(std::ceil(r.length / step));
    const int nv = static_cast<int>(std::ceil(r.width / step));
    const double hu = r.length / 2 - kEdgeInset;
    const double hv = r.width / 2 - kEdgeInset;
    const Vec2 u = r.axis_u();
    const Vec2 v = r.axis_v();
    int worst = 0;
    for (int i = 0; i <= nu; ++i) {
        const double a = -hu + 2 * hu * i / nu;
        for (int j = 0; j <= nv; ++j) {
            const double b = -hv + 2 * hv * j / nv;
            worst = std::max(worst, cost_at(r.center + u * a + v * b));
            if (worst >= kCollisionCost) {
                return worst;
            }
        }
    }
    return worst;
}

int CostMap::min_cost() const {
    return cells_.empty() ? 0 : *std::min_element(cells_.begin(), cells_.end());
}

CostMap CostMap::load(std::istream &in) {
    double resolution = 1.0;
    Vec2 origin{};
    std::vector<std::vector<int>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) {
            continue;
        }
        if (first[0] == '#') {
            std::string key = first.size() > 1 ? first.substr(1) : "";
            if (key.empty()) {
                ls >> key;
            }
            if (key == "resolution") {
                require<InputError>(static_cast<bool>(ls >> resolution),
                                    "cost map: malformed resolution header");
            } else if (key == "origin") {
                require<InputError>(static_cast<bool>(ls >> origin.x >> origin.y),
                                    "cost map: malformed origin header");
            }
            continue;
        }
        std::istringstream rs(line);
        std::vector<int> row;
        std::string tok;
        while (rs >> tok) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(tok, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            require<InputError>(used == tok.size() && v >= 0,
                                "cost map: bad cell value '" + tok + "'");
            row.push_back(v);
        }
        require<InputError>(rows.empty() || row.size() == rows.front().size(),
                            "cost map: ragged rows");
        rows.push_back(std::move(row));
    }
    require<InputError>(!rows.empty(), "cost map: no rows");
    require<InputError>(resolution > 0.0, "cost map: resolution must be positive");
    CostMap m(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()), resolution,
              origin);
    const int nrows = m.rows();
    for (int r = 0; r < nrows; ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            m.set(c, nrows - 1 - r, rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        }
    }
    return m;
}

CostMap CostMap::load_file(const std::string &path) {
    std::ifstream in(path);
    require<InputError>(in.good(), "cannot open cost map " + path);
    return load(in);
}

void CostMap::save(std::ostream &out) const {
    out << "# resolution " << resolution_ << '\n';
    out << "# origin " << origin_.x << ' ' << origin_.y << '\n';
    for (int r = rows_ - 1; r >= 0; --r) {
        for (int c = 0; c < cols_; ++c) {
            out << (c ? " " : "") << at(c, r);
        }
        out << '\n';
    }
}

} // namespace navq::env
