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
 * Grid cost map. Cell values follow the driving convention used throughout
 * the environment: 1 on the road, 50 on the sidewalk, 100 for anything the
 * car would collide with. Cells outside the grid read as 100.
 */
#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "navq/env/geometry.hpp"

namespace navq::env {

inline constexpr int kRoadCost = 1;
inline constexpr int kSidewalkCost = 50;
inline constexpr int kCollisionCost = 100;

class CostMap {
  public:
    CostMap() = default;
    /// `cols` x `rows` cells of size `resolution`, cell (0, 0) has its lower
    /// left corner at `origin`. Every cell starts at `fill`.
    CostMap(int cols, int rows, double resolution, Vec2 origin, int fill = kRoadCost);

    [[nodiscard]] int cols() const { return cols_; }
    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] double resolution() const { return resolution_; }
    [[nodiscard]] Vec2 origin() const { return origin_; }

    [[nodiscard]] bool in_bounds(int col, int row) const {
        return col >= 0 && row >= 0 && col < cols_ && row < rows_;
    }
    [[nodiscard]] int at(int col, int row) const;
    void set(int col, int row, int cost);

    /// Cost of the cell containing world point `p`.
    [[nodiscard]] int cost_at(Vec2 p) const;
    [[nodiscard]] bool contains_point(Vec2 p) const;

    /// Raises every cell whose centre lies in `r` to at least `cost`.
    void paint(const OrientedRect &r, int cost);
    /// Same for the axis-aligned band ymin <= y < ymax.
    void paint_band(double ymin, double ymax, int cost);

    /// Max cell cost under the rectangle; a zero-size rectangle reads the
    /// single cell under its centre.
    [[nodiscard]] int footprint_cost(const OrientedRect &r) const;

    [[nodiscard]] int min_cost() const;

    /// Plain-text form: optional `# resolution <r>` and `# origin <x> <y>`
    /// header lines, then one line of whitespace-separated integer costs
    /// per row. The first text row is the top (highest y) row.
    static CostMap load(std::istream &in);
    static CostMap load_file(const std::string &path);
    void save(std::ostream &out) const;

  private:
    int cols_ = 0;
    int rows_ = 0;
    double resolution_ = 1.0;
    Vec2 origin_{};
    std::vector<int> cells_;
};

} // namespace navq::env
