// Copyright 2026 The dqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dqsim/gates.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace dqsim {

namespace {
constexpr c64 kI{0.0, 1.0};
}

Mat4 exp_xy(double coupling, double t) {
    // H = -J (XX + YY) = -2J (|01><10| + |10><01|); the exponential rotates
    // the anti-aligned subspace by angle 2Jt and leaves |00>, |11> alone.
    const double angle = 2.0 * coupling * t;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat4 u = Mat4::Identity();
    u(1, 1) = c;
    u(1, 2) = kI * s;
    u(2, 1) = kI * s;
    u(2, 2) = c;
    return u;
}

Mat4 exp_zz(double coupling, double t) {
    const c64 phase_eq = std::exp(kI * (coupling * t));
    const c64 phase_ne = std::exp(-kI * (coupling * t));
    Mat4 u = Mat4::Zero();
    u(0, 0) = phase_eq;
    u(1, 1) = phase_ne;
    u(2, 2) = phase_ne;
    u(3, 3) = phase_eq;
    return u;
}

Mat2 exp_x(double field, double t) {
    const double c = std::cos(field * t);
    const double s = std::sin(field * t);
    Mat2 u;
    u << c64{c, 0.0}, -kI * s, -kI * s, c64{c, 0.0};
    return u;
}

MatX term_gate(const TermSpec& term, double t) {
    switch (term.kind) {
        case TermKind::XXPlusYY:
            return exp_xy(term.coupling, t);
        case TermKind::ZZ:
            return exp_zz(term.coupling, t);
        case TermKind::XField:
            return exp_x(term.coupling, t);
    }
    throw std::invalid_argument("term_gate: unknown term kind");
}

MatX term_hamiltonian(const TermSpec& term) {
    Mat2 sx;
    sx << 0, 1, 1, 0;
    Mat2 sy;
    sy << 0, -kI, kI, 0;
    Mat2 sz;
    sz << 1, 0, 0, -1;
    switch (term.kind) {
        case TermKind::XXPlusYY: {
            // Order (bit_b, bit_a): the left Kronecker factor acts on the
            // high-order index.
            MatX h = Eigen::kroneckerProduct(sx, sx) + Eigen::kroneckerProduct(sy, sy);
            return -term.coupling * h;
        }
        case TermKind::ZZ:
            return -term.coupling * Eigen::kroneckerProduct(sz, sz).eval();
        case TermKind::XField:
            return term.coupling * sx;
    }
    throw std::invalid_argument("term_hamiltonian: unknown term kind");
}

MatX dense_exp(const MatX& hamiltonian, double t) {
    const Eigen::Index n = hamiltonian.rows();
    if (n != hamiltonian.cols() || n > (1 << 12)) {
        throw std::invalid_argument("dense_exp: matrix must be square with n <= 4096");
    }
    const double herm_err = (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > 1e-12) {
        throw std::invalid_argument("dense_exp: input is not Hermitian within 1e-12");
    }
    Eigen::SelfAdjointEigenSolver<MatX> solver(hamiltonian);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("dense_exp: eigendecomposition failed");
    }
    const Eigen::VectorXd& evals = solver.eigenvalues();
    const MatX& evecs = solver.eigenvectors();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        phases(i) = std::exp(-kI * (evals(i) * t));
    }
    return evecs * phases.asDiagonal() * evecs.adjoint();
}

double unitarity_error(const MatX& u) {
    const MatX d = u.adjoint() * u - MatX::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

}  // namespace dqsim
