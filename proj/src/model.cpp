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

#include "dqsim/model.hpp"

#include <stdexcept>
#include <string>

namespace dqsim {

ChainModel build_model(ModelKind kind, int num_sites, double coupling, double field) {
    if (num_sites < 2) {
        throw std::invalid_argument("build_model: need at least 2 sites, got " +
                                    std::to_string(num_sites));
    }
    if (kind == ModelKind::XY && field != 0.0) {
        throw std::invalid_argument("build_model: the XY model has no field term; h must be 0");
    }
    ChainModel model{kind, num_sites, coupling, field, {}};
    model.bonds.reserve(num_sites - 1);
    for (int i = 0; i + 1 < num_sites; ++i) {
        model.bonds.push_back({i, i + 1, i % 2 == 0 ? BondParity::Even : BondParity::Odd});
    }
    return model;
}

Partition build_partition(const ChainModel& model, int num_nodes) {
    if (num_nodes < 1) {
        throw std::invalid_argument("build_partition: need at least 1 node");
    }
    if (model.num_sites % num_nodes != 0) {
        throw std::invalid_argument("build_partition: L=" + std::to_string(model.num_sites) +
                                    " is not divisible into " + std::to_string(num_nodes) +
                                    " equal sections");
    }
    Partition part;
    part.num_nodes = num_nodes;
    part.sites_per_node = model.num_sites / num_nodes;
    part.node_of_site.resize(model.num_sites);
    for (int i = 0; i < model.num_sites; ++i) {
        part.node_of_site[i] = i / part.sites_per_node;
    }
    for (int b = 0; b < static_cast<int>(model.bonds.size()); ++b) {
        if (part.node_of_site[model.bonds[b].a] != part.node_of_site[model.bonds[b].b]) {
            part.cut_bonds.push_back(b);
        }
    }
    return part;
}

StateVector initial_state(const ChainModel& model) {
    std::vector<Spin> spins(model.num_sites, Spin::Down);
    if (model.kind == ModelKind::XY) {
        if (model.num_sites % 2 != 0) {
            throw std::invalid_argument(
                "initial_state: the XY domain wall state needs an even L, got " +
                std::to_string(model.num_sites));
        }
        for (int i = 0; i < model.num_sites / 2; ++i) {
            spins[i] = Spin::Up;
        }
    }
    return StateVector::basis_state(model.num_sites, spins);
}

}  // namespace dqsim
