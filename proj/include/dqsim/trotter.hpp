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

// Gate-schedule builders for the three decomposition schemes of the chain
// evolution operator:
//
//   uniform     (T_0(dt/2) T_even(dt/2) T_odd(dt) T_even(dt/2) T_0(dt/2))^N
//   sparse      per macro step, every node runs n/2 local steps of size dt
//               around one coarse cut-bond exponential of size n*dt
//   stochastic  cut-bond step sizes drawn from a clamped normal
//               distribution, with node-local fills keeping the per-node
//               clock equal to each cut event's cumulative-time key
//
// Schedules store coarse layers (LocalBlock and CutBond); expand_layers()
// yields the atomic Local1Q/EvenBonds/OddBonds sub-layers of each
// second-order block.

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dqsim/model.hpp"

namespace dqsim {

enum class LayerKind {
    Local1Q,     // field exponentials on every site in scope
    EvenBonds,   // interaction exponentials on even-parity bonds in scope
    OddBonds,    // same for odd parity
    CutBond,     // interaction exponential on one cut bond
    LocalBlock,  // one symmetric second-order block restricted to scope
};

/// One circuit layer. scope_node < 0 means whole chain; CutBond layers
/// reference model.bonds[bond] instead.
struct Layer {
    LayerKind kind;
    double duration;
    int scope_node = -1;
    int bond = -1;
};

enum class Scheme { Uniform, Sparse, Stochastic };

/// Snapshot marker: the state after layers[0..layer_pos) corresponds to
/// simulated time `time` (uniform: every step; sparse: every macro step;
/// stochastic: every cut-event completion).
struct SnapshotPoint {
    std::size_t layer_pos;
    double time;
};

struct ScheduleMeta {
    Scheme scheme = Scheme::Uniform;
    int num_steps = 0;  // N
    int sparsity = 0;   // n
    double dt = 0.0;
    double dt_ref = 0.0;
    double t_end = 0.0;
    std::uint64_t seed = 0;
    bool seeded = false;
    // Stochastic only: the drawn step list per cut bond, [t1, t2, ...].
    std::vector<std::vector<double>> cut_steps;
};

struct Schedule {
    std::vector<Layer> layers;
    std::vector<SnapshotPoint> snapshots;
    ScheduleMeta meta;

    [[nodiscard]] std::vector<double> snapshot_times() const;
};

/// Parameters of the stochastic scheme. The first step t1 is deterministic
/// (the interconnect can be initialized before the run starts) and
/// defaults to mu, which reproduces the sparse scheme at sigma = 0.
struct StochasticParams {
    double mu;
    double sigma;
    std::uint64_t seed;
    double t1;

    static StochasticParams with_default_t1(double mu, double sigma, std::uint64_t seed) {
        return {mu, sigma, seed, mu};
    }
};

/// N repetitions of the symmetric second-order block with dt = t/N. For XY
/// (no field term) each block expands to bond layers only.
[[nodiscard]] Schedule build_uniform(const ChainModel& model, int num_steps, double t);

/// Sparse scheme per the coarse/fine split: N/n macro steps, each holding
/// n/2 local steps per node, one coarse exponential of duration n*dt per
/// cut bond, then n/2 more local steps. n must be even, N divisible by n,
/// and the partition must have at least 2 nodes. (At n = 1 uniform and
/// sparse coincide; use build_uniform.)
[[nodiscard]] Schedule build_sparse(const ChainModel& model, const Partition& partition,
                                    int num_steps, int sparsity, double t);

/// Draws the cut-bond step list [t1, t2, ..., tm]: t1 = params.t1
/// deterministic, the rest Normal(mu, sigma) clamped below at dt_ref, and
/// the last entry replaced so the sum equals t_end exactly. If the
/// replacement would make the last entry non-positive, the last drawn step
/// is dropped and the adjustment repeated.
[[nodiscard]] std::vector<double> draw_cut_steps(const StochasticParams& params, double t_end,
                                                 double dt_ref, std::mt19937_64& rng);

/// Stochastic sparse scheme: half-block fills of t1/2 on every node,
/// U_int(t1) on every cut bond, then all remaining cut events ordered by
/// ascending cumulative-time key (ties broken by ascending cut-bond
/// index), each preceded by node-local fills bringing the two adjacent
/// node clocks up to the key; final fills bring every node to t_end.
[[nodiscard]] Schedule build_stochastic(const ChainModel& model, const Partition& partition,
                                        const StochasticParams& params, double dt_ref,
                                        double t_end);

/// Same construction from externally supplied per-cut-bond step lists
/// (each [t1, t2, ...] summing to t_end). build_stochastic draws the lists
/// and delegates here.
[[nodiscard]] Schedule build_stochastic_from_steps(const ChainModel& model,
                                                   const Partition& partition,
                                                   const std::vector<std::vector<double>>& steps,
                                                   double dt_ref, double t_end);

/// Atomic decomposition: LocalBlock layers are replaced by their
/// Local1Q/EvenBonds/OddBonds sequence, everything else passes through.
[[nodiscard]] std::vector<Layer> expand_layers(const ChainModel& model,
                                               const std::vector<Layer>& layers);

using SnapshotFn = std::function<void(double time, const StateVector& state)>;

struct ExecOptions {
    // Use dense matrices through StateVector::apply_* instead of the
    // term-specialized kernels (slow reference path for tests).
    bool use_dense_gates = false;
    // Cache-blocked execution: gates whose bits fall entirely below /
    // above the split are batched and run chunk- or tile-wise. Kicks in
    // automatically for L >= min_grouped_sites.
    int min_grouped_sites = 20;
    // Bit position of the low/high split; <= 0 picks one automatically
    // (node-boundary aligned when the schedule is partitioned).
    int split_bits = 0;
};

/// Applies the schedule to the state in place, invoking the callback at
/// every snapshot point.
void execute(const Schedule& schedule, const ChainModel& model, StateVector& state,
             const SnapshotFn& on_snapshot = {}, const ExecOptions& options = {});

namespace detail {
struct CompiledOps;
}

/// Incremental executor for lockstep co-evolution of several runs.
class ScheduleRunner {
  public:
    ScheduleRunner(const ChainModel& model, const Schedule& schedule, StateVector initial,
                   ExecOptions options = {});

    [[nodiscard]] const std::vector<double>& snapshot_times() const { return times_; }
    [[nodiscard]] std::size_t snapshot_count() const { return times_.size(); }
    [[nodiscard]] const StateVector& state() const { return state_; }
    [[nodiscard]] StateVector take_state() && { return std::move(state_); }

    /// Executes layers until snapshot `snap_idx` (inclusive) has been
    /// reached. Must be called with non-decreasing indices.
    void advance_to_snapshot(std::size_t snap_idx);

    /// Executes any layers after the last snapshot.
    void finish();

  private:
    [[nodiscard]] bool grouped() const;

    std::shared_ptr<const detail::CompiledOps> ops_;
    ExecOptions options_;
    StateVector state_;
    std::vector<double> times_;
    std::size_t op_pos_ = 0;
    std::size_t snap_pos_ = 0;
};

/// Per-site local evolution time (from LocalBlock layers) and per-bond
/// cut evolution time (from CutBond layers). Both must reach t_end for a
/// well-formed sparse or stochastic schedule.
struct TimeAudit {
    std::vector<double> site_local_time;
    std::vector<double> cut_bond_time;  // indexed like model.bonds; 0 for uncut bonds
};

[[nodiscard]] TimeAudit audit_schedule(const Schedule& schedule, const ChainModel& model);

/// Line-oriented text dump, one layer per line (kind, scope, duration at
/// 17 significant digits), for golden-file tests.
[[nodiscard]] std::string to_text(const Schedule& schedule);

}  // namespace dqsim
