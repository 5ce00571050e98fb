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

// Fidelities, magnetization, magnetic correlations and their deviations
// from a reference trajectory. All observables are computed by a single
// pass over amplitudes with bit tests -- no operator matrices -- to stay
// feasible at L = 24.

#include <vector>

#include "dqsim/statevector.hpp"

namespace dqsim {

/// Time series of per-snapshot values (one row per time: a scalar, a
/// per-site vector, or a per-pair vector, all stored as rows of equal
/// width).
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> values;

    [[nodiscard]] bool empty() const { return times.empty(); }
    [[nodiscard]] std::size_t size() const { return times.size(); }
};

/// |<a|b>|^2, clamped into [0, 1] against rounding.
[[nodiscard]] double fidelity(const StateVector& a, const StateVector& b);

/// m_i = <sigma_i^z> for every site.
[[nodiscard]] std::vector<double> magnetization(const StateVector& state);

/// chi_{ij} = <sigma_i^z sigma_j^z>; exactly 1 for i = j.
[[nodiscard]] double correlation_zz(const StateVector& state, int site_i, int site_j);

/// One accumulation pass yielding the full magnetization profile and the
/// correlation row chi_{0,j} for all j. Equivalent to calling
/// magnetization / correlation_zz per entry, but bucketed over index
/// halves so the amplitude sweep happens once.
struct SnapshotObservables {
    std::vector<double> magnetization;
    std::vector<double> correlation_row0;
};

[[nodiscard]] SnapshotObservables snapshot_observables(const StateVector& state);

/// Element-wise difference of two series on identical time grids, plus
/// the maximum absolute deviation over all entries and times.
struct DeviationResult {
    TimeSeries difference;
    double max_abs = 0.0;
};

[[nodiscard]] DeviationResult deviation_series(const TimeSeries& test,
                                               const TimeSeries& reference);

/// Rows of `series` at the requested times (matched within 1e-9, which
/// must all be present); used to align a reference trajectory with a
/// coarser run before taking deviations.
[[nodiscard]] TimeSeries select_times(const TimeSeries& series,
                                      const std::vector<double>& times);

}  // namespace dqsim
