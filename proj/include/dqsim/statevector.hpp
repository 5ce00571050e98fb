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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dqsim {

using c64 = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

/// Spin labels in the sigma^z eigenbasis.
///
/// Basis convention (fixed once, asserted by tests):
///   - site i maps to bit i of the amplitude index (site 0 = least
///     significant bit),
///   - |up> (sigma^z eigenvalue +1) maps to bit value 0, |down> to 1,
/// so that sigma^z = diag(+1, -1) in bit order.
enum class Spin : unsigned char { Up = 0, Down = 1 };

/// Dense statevector of a chain of spin-1/2 sites.
///
/// Holds 2^L complex amplitudes and applies one- and two-qubit unitaries
/// in place via bit-indexed kernels. A StateVector supports exclusive
/// mutation: one writer, no concurrent readers during a gate application.
/// Distinct StateVectors are independent and may be evolved on separate
/// threads.
class StateVector {
  public:
    /// Constructs |up...up> (amplitude 1 at index 0).
    explicit StateVector(int num_sites);

    /// Computational-basis state with the given spin pattern, spins[i]
    /// being the spin at site i.
    static StateVector basis_state(int num_sites, std::span<const Spin> spins);

    [[nodiscard]] int num_sites() const { return num_sites_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }

    [[nodiscard]] std::span<c64> amplitudes() { return amps_; }
    [[nodiscard]] std::span<const c64> amplitudes() const { return amps_; }

    c64& operator[](std::size_t idx) { return amps_[idx]; }
    const c64& operator[](std::size_t idx) const { return amps_[idx]; }

    /// Applies a 2x2 unitary to one site, in place.
    void apply_1q(int site, const Mat2& u);

    /// Applies a 4x4 unitary to two distinct sites, in place.
    ///
    /// Row/column order of u is (bit_b, bit_a) = (0,0),(0,1),(1,0),(1,1)
    /// with site_a the low-order index.
    void apply_2q(int site_a, int site_b, const Mat4& u);

    [[nodiscard]] double norm() const;

    /// Enables checking input matrices for unitarity (1e-12). Off by
    /// default; release runs skip the check for speed.
    void set_validation(bool enabled) { validate_ = enabled; }
    [[nodiscard]] bool validation() const { return validate_; }

  private:
    int num_sites_;
    bool validate_ = false;
    std::vector<c64> amps_;
};

/// <a|b> = sum_i conj(a_i) * b_i.
[[nodiscard]] c64 inner_product(const StateVector& a, const StateVector& b);

}  // namespace dqsim
