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
 * Test-only density-matrix simulator for one or two qubits.
 *
 * Builds full 2^n x 2^n operators with Eigen and evolves rho directly, so it
 * shares no code with the statevector kernels it is used to check.
 */
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace navq::testing {

class DensityMatrix {
  public:
    using Mat = Eigen::MatrixXcd;
    using C = std::complex<double>;

    explicit DensityMatrix(int n_qubits) : n_(n_qubits) {
        if (n_qubits < 1 || n_qubits > 2) {
            throw std::invalid_argument("oracle supports 1 or 2 qubits");
        }
        const int dim = 1 << n_qubits;
        rho_ = Mat::Zero(dim, dim);
        rho_(0, 0) = 1.0;
    }

    static Mat pauli(char p) {
        Mat m(2, 2);
        switch (p) {
        case 'X':
            m << 0, 1, 1, 0;
            break;
        case 'Y':
            m << 0, C(0, -1), C(0, 1), 0;
            break;
        case 'Z':
            m << 1, 0, 0, -1;
            break;
        default:
            m = Mat::Identity(2, 2);
        }
        return m;
    }

    /// exp(-i angle P / 2) = cos(angle/2) I - i sin(angle/2) P.
    static Mat rotation(char p, double angle) {
        return std::cos(angle / 2) * Mat::Identity(2, 2) -
               C(0, 1) * std::sin(angle / 2) * pauli(p);
    }

    /// Lifts a one-qubit operator; qubit q is bit q of the basis index.
    Mat lift(const Mat &op, int q) const {
        Mat full = Mat::Identity(1, 1);
        for (int k = n_ - 1; k >= 0; --k) {
            const Mat f = (k == q) ? op : Mat::Identity(2, 2);
            Mat next(full.rows() * 2, full.cols() * 2);
            for (int i = 0; i < full.rows(); ++i) {
                for (int j = 0; j < full.cols(); ++j) {
                    next.block(i * 2, j * 2, 2, 2) = full(i, j) * f;
                }
            }
            full = next;
        }
        return full;
    }

    void apply(const Mat &u) { rho_ = u * rho_ * u.adjoint(); }
    void rotate(char axis, int q, double angle) { apply(lift(rotation(axis, angle), q)); }

    void cz() {
        Mat u = Mat::Identity(4, 4);
        u(3, 3) = -1;
        apply(u);
    }

    void depolarize(int q, double p) {
        Mat out = (1 - p) * rho_;
        for (char c : {'X', 'Y', 'Z'}) {
            const Mat P = lift(pauli(c), q);
            out += (p / 3) * P * rho_ * P.adjoint();
        }
        rho_ = out;
    }

    double expectation_z(int q) const { return (lift(pauli('Z'), q) * rho_).trace().real(); }
    const Mat &rho() const { return rho_; }

  private:
    int n_;
    Mat rho_;
};

} // namespace navq::testing
