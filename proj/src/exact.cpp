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

#include "dqsim/exact.hpp"

#include <stdexcept>
#include <string>

namespace dqsim {
namespace exact {

namespace {
constexpr int kMaxDenseSites = 12;

void check_dense_sites(int num_sites) {
    if (num_sites > kMaxDenseSites) {
        throw std::invalid_argument("exact: dense work is capped at L <= " +
                                    std::to_string(kMaxDenseSites) + ", got L=" +
                                    std::to_string(num_sites));
    }
}
}  // namespace

MatX embed_1q(int num_sites, int site, const Mat2& op) {
    check_dense_sites(num_sites);
    const std::size_t dim = std::size_t{1} << num_sites;
    MatX out = MatX::Zero(dim, dim);
    const std::size_t mask = std::size_t{1} << site;
    for (std::size_t col = 0; col < dim; ++col) {
        const int bit = static_cast<int>((col >> site) & 1U);
        const std::size_t base = col & ~mask;
        out(base, col) += op(0, bit);
        out(base | mask, col) += op(1, bit);
    }
    return out;
}

MatX embed_2q(int num_sites, int site_a, int site_b, const Mat4& op) {
    check_dense_sites(num_sites);
    if (site_a == site_b) {
        throw std::invalid_argument("embed_2q: sites must be distinct");
    }
    const std::size_t dim = std::size_t{1} << num_sites;
    MatX out = MatX::Zero(dim, dim);
    const std::size_t ma = std::size_t{1} << site_a;
    const std::size_t mb = std::size_t{1} << site_b;
    for (std::size_t col = 0; col < dim; ++col) {
        const int col_sub = static_cast<int>(((col >> site_b) & 1U) * 2 + ((col >> site_a) & 1U));
        const std::size_t base = col & ~(ma | mb);
        for (int row_sub = 0; row_sub < 4; ++row_sub) {
            const std::size_t row =
                base | ((row_sub & 1) != 0 ? ma : 0U) | ((row_sub & 2) != 0 ? mb : 0U);
            out(row, col) += op(row_sub, col_sub);
        }
    }
    return out;
}

MatX assemble(const ChainModel& model) {
    check_dense_sites(model.num_sites);
    const std::size_t dim = std::size_t{1} << model.num_sites;
    MatX h = MatX::Zero(dim, dim);
    const Mat4 bond_h = term_hamiltonian(model.bond_term());
    for (const Bond& bond : model.bonds) {
        h += embed_2q(model.num_sites, bond.a, bond.b, bond_h);
    }
    if (const auto site = model.site_term()) {
        const Mat2 site_h = term_hamiltonian(*site);
        for (int i = 0; i < model.num_sites; ++i) {
            h += embed_1q(model.num_sites, i, site_h);
        }
    }
    return h;
}

StateVector evolve(const ChainModel& model, const StateVector& state, double t) {
    if (state.num_sites() != model.num_sites) {
        throw std::invalid_argument("exact::evolve: state/model size mismatch");
    }
    const MatX u = dense_exp(assemble(model), t);
    const auto amps = state.amplitudes();
    const Eigen::Map<const Eigen::VectorXcd> psi(amps.data(),
                                                 static_cast<Eigen::Index>(amps.size()));
    const Eigen::VectorXcd evolved = u * psi;
    StateVector out(model.num_sites);
    auto out_amps = out.amplitudes();
    for (std::size_t i = 0; i < out_amps.size(); ++i) {
        out_amps[i] = evolved(static_cast<Eigen::Index>(i));
    }
    return out;
}

}  // namespace exact
}  // namespace dqsim
