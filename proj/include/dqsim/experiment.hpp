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

// Config-driven experiment runner: evolves a test schedule and the uniform
// reference trajectory on a shared snapshot grid, records fidelities and
// observables, aggregates stochastic ensembles, and writes CSV time
// series.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqsim/model.hpp"
#include "dqsim/observables.hpp"
#include "dqsim/trotter.hpp"

namespace dqsim {

struct ExperimentConfig {
    ModelKind kind = ModelKind::XY;
    int num_sites = 0;
    double coupling = 1.0;
    double field = 0.0;

    Scheme scheme = Scheme::Uniform;
    double t_end = 0.0;

    double dt = 0.0;       // uniform scheme
    // Uniform scheme only: keep dt exact and run ceil(t_end/dt) steps (the
    // run may overshoot t_end slightly). The default rounds the step count
    // and stretches dt so the evolution ends at t_end exactly.
    bool exact_dt = false;
    int num_nodes = 1;     // k; sparse and stochastic schemes
    int sparsity = 0;      // n; sparse scheme
    double dt_ref = 0.1;   // node-local step of sparse/stochastic schemes

    double mu = 0.0;       // stochastic scheme
    double sigma = 0.0;
    int ensemble_size = 1;
    std::uint64_t base_seed = 0;

    double reference_dt = 0.1;  // step size of the reference trajectory
    int snapshot_stride = 1;    // keep every s-th common snapshot (final always kept)

    bool want_fidelity = true;
    bool want_magnetization = false;
    bool want_correlation = false;

    std::string output_path;

    /// Parses the JSON config text; throws std::invalid_argument with
    /// field diagnostics on malformed input.
    static ExperimentConfig from_json_text(const std::string& text);
    [[nodiscard]] std::string to_json_text() const;

    /// Validates cross-field consistency (scheme vs. parameter set).
    void validate() const;
};

/// Mean/std of the reference fidelity across ensemble instances, per
/// snapshot time common to every instance.
struct EnsembleStats {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> stddev;
};

struct ExperimentResult {
    ExperimentConfig config;
    TimeSeries fidelity;         // width 1
    TimeSeries magnetization;    // width L
    TimeSeries correlation;      // width L: chi_{0,j}
    EnsembleStats ensemble;      // stochastic ensembles only
};

/// Sweep output: the shared reference trajectory's observables plus one
/// result per sweep value.
struct SweepResult {
    ExperimentResult reference;
    std::vector<ExperimentResult> runs;
};

/// Runs one experiment against its uniform reference.
[[nodiscard]] ExperimentResult run(const ExperimentConfig& config);

/// Runs several configs that share model, t_end and reference settings,
/// evolving the reference trajectory only once.
[[nodiscard]] SweepResult run_shared_reference(const std::vector<ExperimentConfig>& configs);

enum class SweepParameter { Sparsity, Dt, Sigma };

/// Expands a base config over sweep values, then runs with a shared
/// reference.
[[nodiscard]] SweepResult sweep(const ExperimentConfig& base, SweepParameter parameter,
                                const std::vector<double>& values);

/// Header row plus one row per snapshot: time, then m_0..m_{L-1}, then
/// chi_0_0..chi_0_{L-1}, then fidelity, then fidelity_mean/fidelity_std --
/// each group present only when recorded. Floats carry 12 significant
/// digits; the first line echoes the config as a `# config: {...}`
/// comment.
void write_csv(const ExperimentResult& result, const std::string& path);

/// Parses a file produced by write_csv.
[[nodiscard]] ExperimentResult read_csv(const std::string& path);

/// True when the numeric content of two results agrees within tol.
[[nodiscard]] bool results_close(const ExperimentResult& a, const ExperimentResult& b,
                                 double tol);

}  // namespace dqsim
