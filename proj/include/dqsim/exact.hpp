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

// Brute-force exact evolution for small chains: the full 2^L x 2^L
// Hamiltonian assembled from Kronecker-embedded terms, propagated through
// dense_exp. Ground truth for convergence and kernel tests; desk-scale
// exactness only (L <= 12, with all oracle-backed acceptance runs at
// L <= 8).

#include "dqsim/model.hpp"

namespace dqsim {
namespace exact {

/// Embeds a 2x2 operator acting on one site into the full 2^L space.
[[nodiscard]] MatX embed_1q(int num_sites, int site, const Mat2& op);

/// Embeds a 4x4 operator acting on two distinct sites into the full 2^L
/// space, with the same (bit_b, bit_a) index convention as
/// StateVector::apply_2q.
[[nodiscard]] MatX embed_2q(int num_sites, int site_a, int site_b, const Mat4& op);

/// H = sum over bonds of the interaction term plus, for TFI, the field
/// term on every site. Requires L <= 12.
[[nodiscard]] MatX assemble(const ChainModel& model);

/// e^{-iHt} |psi> through the dense eigendecomposition.
[[nodiscard]] StateVector evolve(const ChainModel& model, const StateVector& state, double t);

}  // namespace exact
}  // namespace dqsim
