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
 * Small fixed-architecture layers with hand-written backward passes.
 *
 * Forward passes are const and return whatever the backward pass needs in
 * an explicit cache; backward passes accumulate into the layer's gradient
 * buffers and return the gradient with respect to the layer input.
 */
#pragma once

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "navq/nn/params.hpp"
#include "navq/rng.hpp"

namespace navq::nn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Uniform Glorot initialisation, limit sqrt(6 / (fan_in + fan_out)).
void xavier_uniform(Mat &m, Rng &rng, Eigen::Index fan_in, Eigen::Index fan_out);

class DenseLayer {
  public:
    DenseLayer() = default;
    DenseLayer(Eigen::Index in, Eigen::Index out);

    [[nodiscard]] Eigen::Index in_dim() const noexcept { return W.cols(); }
    [[nodiscard]] Eigen::Index out_dim() const noexcept { return W.rows(); }
    [[nodiscard]] std::size_t param_count() const noexcept {
        return static_cast<std::size_t>(W.size() + b.size());
    }

    void init(Rng &rng);
    [[nodiscard]] Vec forward(const Vec &x) const;
    /// Accumulates dW, db; returns dL/dx.
    Vec backward(const Vec &x, const Vec &dy);
    void register_params(ParamSet &set, const std::string &prefix);

    Mat W, dW;
    Vec b, db;
};

/// Wx + b; ConfigError on shape mismatch.
Vec dense_forward(const DenseLayer &layer, const Vec &x);

class LayerNorm {
  public:
    static constexpr double kEps = 1e-5;

    struct Cache {
        Vec xhat;
        double inv_std = 0.0;
    };

    LayerNorm() = default;
    explicit LayerNorm(Eigen::Index dim);

    [[nodiscard]] std::size_t param_count() const noexcept {
        return static_cast<std::size_t>(gain.size() + bias.size());
    }
    [[nodiscard]] Vec forward(const Vec &x, Cache *cache = nullptr) const;
    Vec backward(const Cache &cache, const Vec &dy);
    void register_params(ParamSet &set, const std::string &prefix);

    Vec gain, dgain;
    Vec bias, dbias;
};

/// (x - mean) / sqrt(var + 1e-5) * gain + bias, population variance.
Vec layer_norm(const Vec &x, const Vec &gain, const Vec &bias);

/// Standard LSTM cell; gate rows are stacked [input, forget, candidate, output].
class LstmCell {
  public:
    struct Cache {
        Vec x, h_prev, c_prev;
        Vec i, f, g, o;
        Vec c, tanh_c;
    };
    struct StepGrad {
        Vec dx, dh_prev, dc_prev;
    };

    LstmCell() = default;
    LstmCell(Eigen::Index input_dim, Eigen::Index hidden_dim);

    [[nodiscard]] Eigen::Index input_dim() const noexcept { return W.cols(); }
    [[nodiscard]] Eigen::Index hidden_dim() const noexcept { return U.cols(); }
    [[nodiscard]] std::size_t param_count() const noexcept {
        return static_cast<std::size_t>(W.size() + U.size() + b.size());
    }

    void init(Rng &rng);
    /// Returns (h, c).
    [[nodiscard]] std::pair<Vec, Vec> step(const Vec &x, const Vec &h_prev,
                                           const Vec &c_prev,
                                           Cache *cache = nullptr) const;
    /// Backward through one step given dL/dh and dL/dc at its output.
    StepGrad backward(const Cache &cache, const Vec &dh, const Vec &dc);
    void register_params(ParamSet &set, const std::string &prefix);

    Mat W, dW; ///< 4H x input
    Mat U, dU; ///< 4H x H
    Vec b, db; ///< 4H
};

std::pair<Vec, Vec> lstm_step(const LstmCell &cell, const Vec &x, const Vec &h_prev,
                              const Vec &c_prev);

struct SoftmaxEntropy {
    Vec probs;
    Vec log_probs;
    double entropy = 0.0; ///< -sum p log p, natural log
};

SoftmaxEntropy softmax_entropy(const Vec &logits);

/// dL/dlogits for L = d_logp * log p[action] + d_entropy * H.
Vec softmax_entropy_backward(const SoftmaxEntropy &s, Eigen::Index action,
                             double d_logp, double d_entropy);

/// Elementwise tanh and its backward given the forward output.
inline Vec tanh_forward(const Vec &x) { return x.array().tanh().matrix(); }
inline Vec tanh_backward(const Vec &y, const Vec &dy) {
    return (dy.array() * (1.0 - y.array().square())).matrix();
}

} // namespace navq::nn
