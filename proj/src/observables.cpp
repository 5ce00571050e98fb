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

#include "dqsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dqsim {

double fidelity(const StateVector& a, const StateVector& b) {
    const c64 overlap = inner_product(a, b);
    const double f = overlap.real() * overlap.real() + overlap.imag() * overlap.imag();
    return std::clamp(f, 0.0, 1.0);
}

std::vector<double> magnetization(const StateVector& state) {
    const int num_sites = state.num_sites();
    std::vector<double> m(num_sites, 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        const double p = amps[idx].real() * amps[idx].real() +
                         amps[idx].imag() * amps[idx].imag();
        for (int i = 0; i < num_sites; ++i) {
            m[i] += ((idx >> i) & 1U) != 0 ? -p : p;
        }
    }
    return m;
}

double correlation_zz(const StateVector& state, int site_i, int site_j) {
    const int num_sites = state.num_sites();
    if (site_i < 0 || site_i >= num_sites || site_j < 0 || site_j >= num_sites) {
        throw std::invalid_argument("correlation_zz: site out of range");
    }
    if (site_i == site_j) {
        return 1.0;
    }
    const auto amps = state.amplitudes();
    double chi = 0.0;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        const double p = amps[idx].real() * amps[idx].real() +
                         amps[idx].imag() * amps[idx].imag();
        const bool aligned = (((idx >> site_i) ^ (idx >> site_j)) & 1U) == 0;
        chi += aligned ? p : -p;
    }
    return chi;
}

SnapshotObservables snapshot_observables(const StateVector& state) {
    const int num_sites = state.num_sites();
    const auto amps = state.amplitudes();

    // Probabilities bucketed by the low half of the index, and by
    // (bit 0, high half); every m_i and chi_{0,j} is then a signed sum
    // over at most 2^(L/2+1) buckets instead of 2^L amplitudes.
    const int low_bits = (num_sites + 1) / 2;
    const std::size_t low_dim = std::size_t{1} << low_bits;
    const std::size_t high_dim = amps.size() >> low_bits;
    std::vector<double> low_sum(low_dim, 0.0);
    std::vector<double> high_sum0(high_dim, 0.0);  // bit 0 = 0 (spin up)
    std::vector<double> high_sum1(high_dim, 0.0);  // bit 0 = 1 (spin down)

    const std::size_t low_mask = low_dim - 1;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        const double p = amps[idx].real() * amps[idx].real() +
                         amps[idx].imag() * amps[idx].imag();
        const std::size_t low = idx & low_mask;
        low_sum[low] += p;
        ((idx & 1U) != 0 ? high_sum1 : high_sum0)[idx >> low_bits] += p;
    }

    SnapshotObservables out;
    out.magnetization.assign(num_sites, 0.0);
    out.correlation_row0.assign(num_sites, 0.0);
    out.correlation_row0[0] = 1.0;

    for (std::size_t low = 0; low < low_dim; ++low) {
        const double p = low_sum[low];
        const double sign0 = (low & 1U) != 0 ? -1.0 : 1.0;
        for (int i = 0; i < low_bits; ++i) {
            const double sign_i = ((low >> i) & 1U) != 0 ? -p : p;
            out.magnetization[i] += sign_i;
            if (i > 0) {
                out.correlation_row0[i] += sign0 * sign_i;
            }
        }
    }
    for (std::size_t high = 0; high < high_dim; ++high) {
        const double p0 = high_sum0[high];
        const double p1 = high_sum1[high];
        for (int i = low_bits; i < num_sites; ++i) {
            const double sign_i = ((high >> (i - low_bits)) & 1U) != 0 ? -1.0 : 1.0;
            out.magnetization[i] += sign_i * (p0 + p1);
            out.correlation_row0[i] += sign_i * (p0 - p1);
        }
    }
    return out;
}

TimeSeries select_times(const TimeSeries& series, const std::vector<double>& times) {
    TimeSeries out;
    std::size_t row = 0;
    for (double t : times) {
        while (row < series.times.size() && series.times[row] < t - 1e-9) {
            ++row;
        }
        if (row >= series.times.size() || std::abs(series.times[row] - t) > 1e-9) {
            throw std::invalid_argument("select_times: requested time not present in series");
        }
        out.times.push_back(series.times[row]);
        out.values.push_back(series.values[row]);
    }
    return out;
}

DeviationResult deviation_series(const TimeSeries& test, const TimeSeries& reference) {
    if (test.times.size() != reference.times.size()) {
        throw std::invalid_argument("deviation_series: time grids differ in length (" +
                                    std::to_string(test.times.size()) + " vs " +
                                    std::to_string(reference.times.size()) + ")");
    }
    DeviationResult result;
    result.difference.times = test.times;
    result.difference.values.reserve(test.values.size());
    for (std::size_t row = 0; row < test.times.size(); ++row) {
        if (std::abs(test.times[row] - reference.times[row]) > 1e-9) {
            throw std::invalid_argument("deviation_series: time grids must match exactly");
        }
        if (test.values[row].size() != reference.values[row].size()) {
            throw std::invalid_argument("deviation_series: value widths differ");
        }
        std::vector<double> diff(test.values[row].size());
        for (std::size_t col = 0; col < diff.size(); ++col) {
            diff[col] = test.values[row][col] - reference.values[row][col];
            result.max_abs = std::max(result.max_abs, std::abs(diff[col]));
        }
        result.difference.values.push_back(std::move(diff));
    }
    return result;
}

}  // namespace dqsim
