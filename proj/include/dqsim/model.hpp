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

#pragma once

#include <optional>
#include <vector>

#include "dqsim/gates.hpp"
#include "dqsim/statevector.hpp"

namespace dqsim {

/// The two chain Hamiltonians:
///   XY:  H = -J sum_<i,j> (X_i X_j + Y_i Y_j)
///   TFI: H = -J sum_<i,j> Z_i Z_j + h sum_i X_i
enum class ModelKind { XY, TFI };

enum class BondParity { Even, Odd };

/// Nearest-neighbor bond (i, i+1). Parity is Even iff i is even; bonds of
/// one parity class act on disjoint sites, which enables the layered
/// second-order decomposition.
struct Bond {
    int a;
    int b;
    BondParity parity;
};

/// Open 1-D spin-1/2 chain with L sites and L-1 bonds.
struct ChainModel {
    ModelKind kind;
    int num_sites;
    double coupling;  // J, fixed to 1 in all experiments
    double field;     // h; 0 for XY, 0.5 (slow) or 2.0 (fast quench) for TFI
    std::vector<Bond> bonds;

    /// The 2-site interaction term shared by every bond.
    [[nodiscard]] TermSpec bond_term() const {
        return {kind == ModelKind::XY ? TermKind::XXPlusYY : TermKind::ZZ, coupling};
    }

    /// The 1-site term, if the model has one (TFI only).
    [[nodiscard]] std::optional<TermSpec> site_term() const {
        if (kind == ModelKind::TFI) {
            return TermSpec{TermKind::XField, field};
        }
        return std::nullopt;
    }
};

/// Split of the chain into k contiguous compute nodes of equal size.
/// cut_bonds indexes model.bonds, ordered left to right; a linear chain
/// split into contiguous blocks has exactly k-1 cut bonds.
struct Partition {
    int num_nodes;
    int sites_per_node;
    std::vector<int> node_of_site;
    std::vector<int> cut_bonds;

    [[nodiscard]] int first_site(int node) const { return node * sites_per_node; }
    [[nodiscard]] int last_site(int node) const { return (node + 1) * sites_per_node - 1; }
};

/// Builds the chain and its parity-labeled bond list.
/// Rejects L < 2 and XY with a nonzero field.
[[nodiscard]] ChainModel build_model(ModelKind kind, int num_sites, double coupling,
                                     double field);

/// Partitions the chain into k equal contiguous blocks; L must be
/// divisible by k.
[[nodiscard]] Partition build_partition(const ChainModel& model, int num_nodes);

/// The initial state of the model's quench protocol: a domain wall
/// |up...up down...down> split at the chain center for XY (L must be
/// even), all spins down for TFI.
[[nodiscard]] StateVector initial_state(const ChainModel& model);

}  // namespace dqsim
