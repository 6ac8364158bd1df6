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
 * Named parameter registry, Adam, and the finite-difference gradient check.
 */
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace navq::nn {

/// View of one named tensor and its gradient buffer. Storage is owned by
/// the layer that registered it; a ParamSet must not outlive its model.
struct ParamRef {
    std::string name;
    double *value = nullptr;
    double *grad = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    [[nodiscard]] std::size_t size() const noexcept { return rows * cols; }
};

class ParamSet {
  public:
    void add(std::string name, double *value, double *grad, std::size_t rows,
             std::size_t cols);

    [[nodiscard]] const std::vector<ParamRef> &entries() const noexcept { return refs_; }
    [[nodiscard]] std::size_t total_size() const noexcept;
    [[nodiscard]] const ParamRef *find(const std::string &name) const;

    void zero_grad();
    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::vector<double> grads() const;
    void set_values(std::span<const double> flat);

    /// {"params": [{"name", "shape": [r, c], "data": [...]}, ...]}
    [[nodiscard]] nlohmann::json to_json() const;
    /// Loads values by name; InputError on a missing name or shape mismatch.
    void load_json(const nlohmann::json &j);

  private:
    std::vector<ParamRef> refs_;
};

struct AdamState {
    double lr = 0.0005;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<double> m;
    std::vector<double> v;
};

/// One bias-corrected Adam step, in place. Moment buffers are sized on first
/// use; a later size change is a ConfigError.
void adam_update(AdamState &state, std::span<double> params,
                 std::span<const double> grads);

/// Adam step over every tensor in `set`, in registration order.
void adam_update(AdamState &state, ParamSet &set);

/// Gradient-check denominator floor: rel = |a - n| / max(|a|, |n|, floor).
inline constexpr double kRelErrorFloor = 1e-4;

/// Compares `analytic` with central differences of `loss` at `params`.
/// Returns the largest relative error over all coordinates.
double finite_diff_check(const std::function<double(std::span<const double>)> &loss,
                         std::span<const double> params,
                         std::span<const double> analytic, double h);

} // namespace navq::nn
