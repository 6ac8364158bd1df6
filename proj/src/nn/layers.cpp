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
#include "navq/nn/layers.hpp"

#include <cmath>

#include "navq/error.hpp"

namespace navq::nn {

namespace {

Vec sigmoid(const Vec &x) {
    return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

void register_matrix(ParamSet &set, const std::string &name, Mat &v, Mat &g) {
    set.add(name, v.data(), g.data(), static_cast<std::size_t>(v.rows()),
            static_cast<std::size_t>(v.cols()));
}

void register_vector(ParamSet &set, const std::string &name, Vec &v, Vec &g) {
    set.add(name, v.data(), g.data(), static_cast<std::size_t>(v.size()), 1);
}

} // namespace

void xavier_uniform(Mat &m, Rng &rng, Eigen::Index fan_in, Eigen::Index fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    // Column-major fill so the draw order is fixed.
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            m(i, j) = rng.uniform(-limit, limit);
        }
    }
}

// --- Dense -----------------------------------------------------------------

DenseLayer::DenseLayer(Eigen::Index in, Eigen::Index out)
    : W(Mat::Zero(out, in)), dW(Mat::Zero(out, in)), b(Vec::Zero(out)),
      db(Vec::Zero(out)) {
    require(in >= 1 && out >= 1, "dense layer dimensions must be >= 1");
}

void DenseLayer::init(Rng &rng) {
    xavier_uniform(W, rng, in_dim(), out_dim());
    b.setZero();
}

Vec DenseLayer::forward(const Vec &x) const {
    require(x.size() == in_dim(), "dense input has " + std::to_string(x.size()) +
                                      " entries, expected " +
                                      std::to_string(in_dim()));
    return W * x + b;
}

Vec DenseLayer::backward(const Vec &x, const Vec &dy) {
    require(dy.size() == out_dim() && x.size() == in_dim(),
            "dense backward shape mismatch");
    dW.noalias() += dy * x.transpose();
    db += dy;
    return W.transpose() * dy;
}

void DenseLayer::register_params(ParamSet &set, const std::string &prefix) {
    register_matrix(set, prefix + ".W", W, dW);
    register_vector(set, prefix + ".b", b, db);
}

Vec dense_forward(const DenseLayer &layer, const Vec &x) { return layer.forward(x); }

// --- LayerNorm -------------------------------------------------------------

LayerNorm::LayerNorm(Eigen::Index dim)
    : gain(Vec::Ones(dim)), dgain(Vec::Zero(dim)), bias(Vec::Zero(dim)),
      dbias(Vec::Zero(dim)) {
    require(dim >= 2, "layer norm needs at least 2 features");
}

Vec LayerNorm::forward(const Vec &x, Cache *cache) const {
    require(x.size() == gain.size(), "layer norm input size mismatch");
    const double mean = x.mean();
    const double var = (x.array() - mean).square().mean();
    const double inv_std = 1.0 / std::sqrt(var + kEps);
    Vec xhat = ((x.array() - mean) * inv_std).matrix();
    Vec y = (xhat.array() * gain.array() + bias.array()).matrix();
    if (cache != nullptr) {
        cache->xhat = std::move(xhat);
        cache->inv_std = inv_std;
    }
    return y;
}

Vec LayerNorm::backward(const Cache &cache, const Vec &dy) {
    const auto n = static_cast<double>(dy.size());
    dgain += (dy.array() * cache.xhat.array()).matrix();
    dbias += dy;
    const Vec dxhat = (dy.array() * gain.array()).matrix();
    const double sum_d = dxhat.sum();
    const double sum_dx = dxhat.dot(cache.xhat);
    return ((n * dxhat.array() - sum_d - cache.xhat.array() * sum_dx) *
            (cache.inv_std / n))
        .matrix();
}

void LayerNorm::register_params(ParamSet &set, const std::string &prefix) {
    register_vector(set, prefix + ".gain", gain, dgain);
    register_vector(set, prefix + ".bias", bias, dbias);
}

Vec layer_norm(const Vec &x, const Vec &gain, const Vec &bias) {
    LayerNorm ln(x.size());
    ln.gain = gain;
    ln.bias = bias;
    return ln.forward(x);
}

// --- LSTM ------------------------------------------------------------------

LstmCell::LstmCell(Eigen::Index input_dim, Eigen::Index hidden_dim)
    : W(Mat::Zero(4 * hidden_dim, input_dim)), dW(Mat::Zero(4 * hidden_dim, input_dim)),
      U(Mat::Zero(4 * hidden_dim, hidden_dim)), dU(Mat::Zero(4 * hidden_dim, hidden_dim)),
      b(Vec::Zero(4 * hidden_dim)), db(Vec::Zero(4 * hidden_dim)) {
    require(input_dim >= 1 && hidden_dim >= 1, "LSTM dimensions must be >= 1");
}

void LstmCell::init(Rng &rng) {
    xavier_uniform(W, rng, input_dim(), hidden_dim());
    xavier_uniform(U, rng, hidden_dim(), hidden_dim());
    b.setZero();
}

std::pair<Vec, Vec> LstmCell::step(const Vec &x, const Vec &h_prev, const Vec &c_prev,
                                   Cache *cache) const {
    const Eigen::Index H = hidden_dim();
    require(x.size() == input_dim() && h_prev.size() == H && c_prev.size() == H,
            "LSTM step shape mismatch");
    const Vec a = W * x + U * h_prev + b;
    Vec i = sigmoid(a.segment(0, H));
    Vec f = sigmoid(a.segment(H, H));
    Vec g = a.segment(2 * H, H).array().tanh().matrix();
    Vec o = sigmoid(a.segment(3 * H, H));
    Vec c = (f.array() * c_prev.array() + i.array() * g.array()).matrix();
    Vec tanh_c = c.array().tanh().matrix();
    Vec h = (o.array() * tanh_c.array()).matrix();
    if (cache != nullptr) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->c_prev = c_prev;
        cache->i = std::move(i);
        cache->f = std::move(f);
        cache->g = std::move(g);
        cache->o = std::move(o);
        cache->c = c;
        cache->tanh_c = std::move(tanh_c);
    }
    return {std::move(h), std::move(c)};
}

LstmCell::StepGrad LstmCell::backward(const Cache &k, const Vec &dh, const Vec &dc) {
    const Eigen::Index H = hidden_dim();
    const auto one = [](const Vec &v) { return 1.0 - v.array(); };
    const Vec dc_total =
        (dc.array() + dh.array() * k.o.array() * (1.0 - k.tanh_c.array().square())).matrix();
    Vec da(4 * H);
    da.segment(0, H) = (dc_total.array() * k.g.array() * k.i.array() * one(k.i)).matrix();
    da.segment(H, H) =
        (dc_total.array() * k.c_prev.array() * k.f.array() * one(k.f)).matrix();
    da.segment(2 * H, H) =
        (dc_total.array() * k.i.array() * (1.0 - k.g.array().square())).matrix();
    da.segment(3 * H, H) =
        (dh.array() * k.tanh_c.array() * k.o.array() * one(k.o)).matrix();

    dW.noalias() += da * k.x.transpose();
    dU.noalias() += da * k.h_prev.transpose();
    db += da;

    StepGrad out;
    out.dx = W.transpose() * da;
    out.dh_prev = U.transpose() * da;
    out.dc_prev = (dc_total.array() * k.f.array()).matrix();
    return out;
}

void LstmCell::register_params(ParamSet &set, const std::string &prefix) {
    register_matrix(set, prefix + ".W", W, dW);
    register_matrix(set, prefix + ".U", U, dU);
    register_vector(set, prefix + ".b", b, db);
}

std::pair<Vec, Vec> lstm_step(const LstmCell &cell, const Vec &x, const Vec &h_prev,
                              const Vec &c_prev) {
    return cell.step(x, h_prev, c_prev);
}

// --- Softmax ---------------------------------------------------------------

SoftmaxEntropy softmax_entropy(const Vec &logits) {
    require(logits.size() >= 1, "softmax needs at least one logit");
    require(logits.allFinite(), "logits must be finite");
    const double mx = logits.maxCoeff();
    const Vec shifted = (logits.array() - mx).matrix();
    const double lse = std::log(shifted.array().exp().sum());
    SoftmaxEntropy out;
    out.log_probs = (shifted.array() - lse).matrix();
    out.probs = out.log_probs.array().exp().matrix();
    out.entropy = -(out.probs.array() * out.log_probs.array()).sum();
    if (out.entropy < 0.0) {
        out.entropy = 0.0;
    }
    return out;
}

Vec softmax_entropy_backward(const SoftmaxEntropy &s, Eigen::Index action,
                             double d_logp, double d_entropy) {
    Vec d = -d_logp * s.probs;
    d(action) += d_logp;
    d.array() -= d_entropy * s.probs.array() * (s.log_probs.array() + s.entropy);
    return d;
}

} // namespace navq::nn
