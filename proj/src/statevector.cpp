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

#include "dqsim/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dqsim/detail/kernels.hpp"

namespace dqsim {

namespace {

constexpr int kMaxSites = 30;

void check_sites(int num_sites) {
    if (num_sites < 1 || num_sites > kMaxSites) {
        throw std::invalid_argument("StateVector: num_sites must be in [1, " +
                                    std::to_string(kMaxSites) + "], got " +
                                    std::to_string(num_sites));
    }
}

template <class Mat>
bool is_unitary(const Mat& u, double tol) {
    const Mat d = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

StateVector::StateVector(int num_sites) : num_sites_(num_sites) {
    check_sites(num_sites);
    amps_.assign(std::size_t{1} << num_sites, c64{0.0, 0.0});
    amps_[0] = c64{1.0, 0.0};
}

StateVector StateVector::basis_state(int num_sites, std::span<const Spin> spins) {
    check_sites(num_sites);
    if (static_cast<int>(spins.size()) != num_sites) {
        throw std::invalid_argument("basis_state: expected " + std::to_string(num_sites) +
                                    " spin labels, got " + std::to_string(spins.size()));
    }
    StateVector psi(num_sites);
    std::size_t idx = 0;
    for (int i = 0; i < num_sites; ++i) {
        if (spins[i] == Spin::Down) {
            idx |= std::size_t{1} << i;
        }
    }
    psi.amps_[0] = c64{0.0, 0.0};
    psi.amps_[idx] = c64{1.0, 0.0};
    return psi;
}

void StateVector::apply_1q(int site, const Mat2& u) {
    if (site < 0 || site >= num_sites_) {
        throw std::invalid_argument("apply_1q: site " + std::to_string(site) +
                                    " out of range for L=" + std::to_string(num_sites_));
    }
    if (validate_ && !is_unitary(u, 1e-12)) {
        throw std::invalid_argument("apply_1q: matrix is not unitary within 1e-12");
    }
    const c64 um[4] = {u(0, 0), u(0, 1), u(1, 0), u(1, 1)};
    detail::apply_1q_dense(amps_.data(), amps_.size(), site, um);
}

void StateVector::apply_2q(int site_a, int site_b, const Mat4& u) {
    if (site_a < 0 || site_a >= num_sites_ || site_b < 0 || site_b >= num_sites_) {
        throw std::invalid_argument("apply_2q: site out of range for L=" +
                                    std::to_string(num_sites_));
    }
    if (site_a == site_b) {
        throw std::invalid_argument("apply_2q: sites must be distinct, got " +
                                    std::to_string(site_a) + " twice");
    }
    if (validate_ && !is_unitary(u, 1e-12)) {
        throw std::invalid_argument("apply_2q: matrix is not unitary within 1e-12");
    }
    c64 um[16];
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            um[row * 4 + col] = u(row, col);
        }
    }
    detail::apply_2q_dense(amps_.data(), amps_.size(), site_a, site_b, um);
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const c64& amp : amps_) {
        sum += amp.real() * amp.real() + amp.imag() * amp.imag();
    }
    return std::sqrt(sum);
}

c64 inner_product(const StateVector& a, const StateVector& b) {
    if (a.num_sites() != b.num_sites()) {
        throw std::invalid_argument("inner_product: dimension mismatch, L=" +
                                    std::to_string(a.num_sites()) + " vs L=" +
                                    std::to_string(b.num_sites()));
    }
    const auto av = a.amplitudes();
    const auto bv = b.amplitudes();
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) {
        re += av[i].real() * bv[i].real() + av[i].imag() * bv[i].imag();
        im += av[i].real() * bv[i].imag() - av[i].imag() * bv[i].real();
    }
    return {re, im};
}

}  // namespace dqsim
