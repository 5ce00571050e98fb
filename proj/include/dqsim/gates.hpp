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

// Closed-form matrix exponentials for every Hamiltonian term of the two
// chain models, plus a generic dense exponential used as the validation
// oracle. The closed forms are hand-derived; tests gate them against
// dense_exp since the -J coupling signs make sign errors likely.

#include <Eigen/Dense>

#include "dqsim/statevector.hpp"

namespace dqsim {

using MatX = Eigen::MatrixXcd;

/// Kind of a single Hamiltonian term.
enum class TermKind {
    XXPlusYY,  // -J (XX + YY) on a bond
    ZZ,        // -J ZZ on a bond
    XField,    // +h X on a site
};

/// One Hamiltonian term: the kind fixes the arity (XXPlusYY and ZZ are
/// 2-site, XField is 1-site), the coupling is J or h (hbar = 1).
struct TermSpec {
    TermKind kind;
    double coupling;

    [[nodiscard]] int arity() const { return kind == TermKind::XField ? 1 : 2; }
};

/// exp(-i * (-J)(sigma^x sigma^x + sigma^y sigma^y) * t).
/// Identity on the {|00>,|11>} subspace; [[cos 2Jt, i sin 2Jt],
/// [i sin 2Jt, cos 2Jt]] on {|01>,|10>}.
[[nodiscard]] Mat4 exp_xy(double coupling, double t);

/// exp(-i * (-J) sigma^z sigma^z * t)
/// = diag(e^{iJt}, e^{-iJt}, e^{-iJt}, e^{iJt}).
[[nodiscard]] Mat4 exp_zz(double coupling, double t);

/// exp(-i * h sigma^x * t) = cos(ht) I - i sin(ht) sigma^x.
[[nodiscard]] Mat2 exp_x(double field, double t);

/// Gate for an arbitrary term; dispatches on the kind.
[[nodiscard]] MatX term_gate(const TermSpec& term, double t);

/// The term Hamiltonian itself (2x2 or 4x4 Hermitian), as summed by the
/// exact-evolution oracle.
[[nodiscard]] MatX term_hamiltonian(const TermSpec& term);

/// e^{-iHt} for a Hermitian H via eigendecomposition. Ground truth for the
/// closed forms above. Exactness of unitarity matters more than speed here.
///
/// Throws std::invalid_argument if H is not Hermitian within 1e-12 or
/// larger than 2^12 x 2^12.
[[nodiscard]] MatX dense_exp(const MatX& hamiltonian, double t);

/// Max element of |u^dagger u - 1|; 0 for an exactly unitary matrix.
[[nodiscard]] double unitarity_error(const MatX& u);

}  // namespace dqsim
