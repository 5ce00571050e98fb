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

#include "dqsim/trotter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dqsim/detail/kernels.hpp"

namespace dqsim {

namespace {

// Absolute tolerance for time bookkeeping; schedule audits promise 1e-9.
constexpr double kTimeEps = 1e-12;

struct Scope {
    int first_site;
    int last_site;  // inclusive
};

Scope layer_scope(const ChainModel& model, const Partition* partition, const Layer& layer) {
    if (layer.scope_node < 0) {
        return {0, model.num_sites - 1};
    }
    if (partition == nullptr) {
        throw std::invalid_argument("schedule references a node but no partition was given");
    }
    return {partition->first_site(layer.scope_node), partition->last_site(layer.scope_node)};
}

}  // namespace

std::vector<double> Schedule::snapshot_times() const {
    std::vector<double> times;
    times.reserve(snapshots.size());
    for (const SnapshotPoint& s : snapshots) {
        times.push_back(s.time);
    }
    return times;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

Schedule build_uniform(const ChainModel& model, int num_steps, double t) {
    if (num_steps < 1) {
        throw std::invalid_argument("build_uniform: need at least one step");
    }
    if (t <= 0.0) {
        throw std::invalid_argument("build_uniform: evolution time must be positive");
    }
    const double dt = t / num_steps;
    Schedule sched;
    sched.meta.scheme = Scheme::Uniform;
    sched.meta.num_steps = num_steps;
    sched.meta.dt = dt;
    sched.meta.dt_ref = dt;
    sched.meta.t_end = t;
    sched.layers.reserve(num_steps);
    sched.snapshots.reserve(num_steps);
    for (int m = 0; m < num_steps; ++m) {
        sched.layers.push_back({LayerKind::LocalBlock, dt, -1, -1});
        const double time = (m + 1 == num_steps) ? t : (m + 1) * dt;
        sched.snapshots.push_back({static_cast<std::size_t>(m + 1), time});
    }
    return sched;
}

Schedule build_sparse(const ChainModel& model, const Partition& partition, int num_steps,
                      int sparsity, double t) {
    if (partition.num_nodes < 2) {
        throw std::invalid_argument("build_sparse: need at least 2 compute nodes");
    }
    if (sparsity < 2) {
        throw std::invalid_argument(
            "build_sparse: sparsity must be >= 2 (uniform and sparse coincide at n=1; "
            "use build_uniform)");
    }
    if (sparsity % 2 != 0) {
        throw std::invalid_argument("build_sparse: sparsity must be even");
    }
    if (num_steps % sparsity != 0) {
        throw std::invalid_argument("build_sparse: N=" + std::to_string(num_steps) +
                                    " is not divisible by n=" + std::to_string(sparsity));
    }
    if (t <= 0.0) {
        throw std::invalid_argument("build_sparse: evolution time must be positive");
    }
    const double dt = t / num_steps;
    const int macros = num_steps / sparsity;
    const int half = sparsity / 2;

    Schedule sched;
    sched.meta.scheme = Scheme::Sparse;
    sched.meta.num_steps = num_steps;
    sched.meta.sparsity = sparsity;
    sched.meta.dt = dt;
    sched.meta.dt_ref = dt;
    sched.meta.t_end = t;
    for (int m = 0; m < macros; ++m) {
        for (int node = 0; node < partition.num_nodes; ++node) {
            for (int s = 0; s < half; ++s) {
                sched.layers.push_back({LayerKind::LocalBlock, dt, node, -1});
            }
        }
        for (int cut : partition.cut_bonds) {
            sched.layers.push_back({LayerKind::CutBond, sparsity * dt, -1, cut});
        }
        for (int node = 0; node < partition.num_nodes; ++node) {
            for (int s = 0; s < half; ++s) {
                sched.layers.push_back({LayerKind::LocalBlock, dt, node, -1});
            }
        }
        const double time = (m + 1 == macros) ? t : (m + 1) * (sparsity * dt);
        sched.snapshots.push_back({sched.layers.size(), time});
    }
    return sched;
}

namespace {

// Box-Muller (cosine branch), one deviate per two 53-bit uniforms from the
// mt19937_64 stream. Hand-rolled so that seeded runs reproduce across
// standard libraries.
double standard_normal(std::mt19937_64& rng) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;          // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::vector<double> draw_cut_steps(const StochasticParams& params, double t_end, double dt_ref,
                                   std::mt19937_64& rng) {
    if (!(params.t1 > 0.0) || !(params.t1 < t_end)) {
        throw std::invalid_argument("draw_cut_steps: need 0 < t1 < t_end");
    }
    if (!(params.mu > 0.0) || params.sigma < 0.0) {
        throw std::invalid_argument("draw_cut_steps: need mu > 0 and sigma >= 0");
    }
    if (!(dt_ref > 0.0)) {
        throw std::invalid_argument("draw_cut_steps: need dt_ref > 0");
    }
    std::vector<double> steps{params.t1};
    double sum = params.t1;
    while (sum < t_end - kTimeEps) {
        const double drawn = params.mu + params.sigma * standard_normal(rng);
        steps.push_back(std::max(drawn, dt_ref));
        sum += steps.back();
    }
    // Replace the last entry so the total hits t_end exactly; drop entries
    // that the replacement would drive to zero or below.
    while (steps.size() > 1) {
        double before_last = 0.0;
        for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
            before_last += steps[i];
        }
        const double adjusted = t_end - before_last;
        if (adjusted > kTimeEps) {
            steps.back() = adjusted;
            return steps;
        }
        steps.pop_back();
    }
    // Only reachable if t1 itself already covered t_end, excluded above.
    throw std::runtime_error("draw_cut_steps: step list collapsed to t1 alone");
}

Schedule build_stochastic(const ChainModel& model, const Partition& partition,
                          const StochasticParams& params, double dt_ref, double t_end) {
    if (partition.num_nodes < 2) {
        throw std::invalid_argument("build_stochastic: need at least 2 compute nodes");
    }
    std::mt19937_64 rng(params.seed);
    std::vector<std::vector<double>> steps;
    steps.reserve(partition.cut_bonds.size());
    for (std::size_t c = 0; c < partition.cut_bonds.size(); ++c) {
        steps.push_back(draw_cut_steps(params, t_end, dt_ref, rng));
    }
    Schedule sched = build_stochastic_from_steps(model, partition, steps, dt_ref, t_end);
    sched.meta.seed = params.seed;
    sched.meta.seeded = true;
    return sched;
}

namespace {

struct CutEvent {
    double key;  // t1/2 + sum_{j=2..i} t_j: local time evolved before the event
    int cut;     // position within partition.cut_bonds
    double duration;
};

// floor with a small forward nudge so that near-integer quotients caused by
// accumulated rounding resolve to the intended whole number of steps.
long full_steps(double interval, double dt_ref) {
    return static_cast<long>(std::floor(interval / dt_ref + 1e-9));
}

}  // namespace

Schedule build_stochastic_from_steps(const ChainModel& model, const Partition& partition,
                                     const std::vector<std::vector<double>>& steps,
                                     double dt_ref, double t_end) {
    if (partition.num_nodes < 2) {
        throw std::invalid_argument("build_stochastic: need at least 2 compute nodes");
    }
    if (steps.size() != partition.cut_bonds.size()) {
        throw std::invalid_argument("build_stochastic: expected one step list per cut bond");
    }
    if (!(dt_ref > 0.0) || !(t_end > 0.0)) {
        throw std::invalid_argument("build_stochastic: need dt_ref > 0 and t_end > 0");
    }
    const double t1 = steps.front().front();
    for (const auto& list : steps) {
        if (list.empty() || std::abs(list.front() - t1) > kTimeEps) {
            throw std::invalid_argument(
                "build_stochastic: the first (deterministic) step must be shared by all "
                "cut bonds");
        }
        double sum = 0.0;
        for (double s : list) {
            if (!(s > 0.0)) {
                throw std::invalid_argument("build_stochastic: step durations must be positive");
            }
            sum += s;
        }
        if (std::abs(sum - t_end) > 1e-9) {
            throw std::invalid_argument("build_stochastic: step list does not sum to t_end");
        }
    }

    Schedule sched;
    sched.meta.scheme = Scheme::Stochastic;
    sched.meta.dt = dt_ref;
    sched.meta.dt_ref = dt_ref;
    sched.meta.t_end = t_end;
    sched.meta.cut_steps = steps;

    std::vector<double> node_clock(partition.num_nodes, 0.0);

    // Fills the node's local evolution up to `target` with reference-size
    // blocks plus one remainder block.
    const auto fill_node = [&](int node, double target) {
        const double interval = target - node_clock[node];
        if (interval <= kTimeEps) {
            node_clock[node] = target;
            return;
        }
        const long full = full_steps(interval, dt_ref);
        for (long s = 0; s < full; ++s) {
            sched.layers.push_back({LayerKind::LocalBlock, dt_ref, node, -1});
        }
        const double remainder = interval - static_cast<double>(full) * dt_ref;
        if (remainder > kTimeEps) {
            sched.layers.push_back({LayerKind::LocalBlock, remainder, node, -1});
        }
        node_clock[node] = target;
    };

    // Symmetrized first step: half-fills, then U_int(t1) on every cut bond.
    for (int node = 0; node < partition.num_nodes; ++node) {
        fill_node(node, t1 / 2.0);
    }
    for (std::size_t c = 0; c < partition.cut_bonds.size(); ++c) {
        sched.layers.push_back({LayerKind::CutBond, t1, -1, partition.cut_bonds[c]});
        sched.snapshots.push_back({sched.layers.size(), t1});
    }

    // Bulk: all remaining cut events ordered by cumulative-time key;
    // ties resolved left to right.
    std::vector<CutEvent> events;
    for (int c = 0; c < static_cast<int>(steps.size()); ++c) {
        double key = t1 / 2.0;
        for (std::size_t i = 1; i < steps[c].size(); ++i) {
            key += steps[c][i];
            events.push_back({key, c, steps[c][i]});
        }
    }
    std::sort(events.begin(), events.end(), [](const CutEvent& a, const CutEvent& b) {
        if (a.key != b.key) {
            return a.key < b.key;
        }
        return a.cut < b.cut;
    });

    std::vector<double> bond_clock(steps.size(), t1);
    for (const CutEvent& ev : events) {
        const Bond& bond = model.bonds[partition.cut_bonds[ev.cut]];
        fill_node(partition.node_of_site[bond.a], ev.key);
        fill_node(partition.node_of_site[bond.b], ev.key);
        sched.layers.push_back({LayerKind::CutBond, ev.duration, -1, partition.cut_bonds[ev.cut]});
        bond_clock[ev.cut] += ev.duration;
        sched.snapshots.push_back({sched.layers.size(), bond_clock[ev.cut]});
    }

    // Closing half-fills bring every node to t_end.
    for (int node = 0; node < partition.num_nodes; ++node) {
        fill_node(node, t_end);
    }
    sched.snapshots.push_back({sched.layers.size(), t_end});

    // Collapse snapshots that share a time, keeping the latest position
    // (simultaneous cut events, and the final event vs. the closing fills).
    std::vector<SnapshotPoint> collapsed;
    for (const SnapshotPoint& snap : sched.snapshots) {
        if (!collapsed.empty() && std::abs(collapsed.back().time - snap.time) <= kTimeEps) {
            collapsed.back() = snap;
        } else {
            collapsed.push_back(snap);
        }
    }
    sched.snapshots = std::move(collapsed);
    return sched;
}

// ---------------------------------------------------------------------------
// Expansion
// ---------------------------------------------------------------------------

namespace {

void expand_block(const ChainModel& model, const Partition* partition, const Layer& block,
                  std::vector<Layer>& out) {
    const Scope scope = layer_scope(model, partition, block);
    bool has_even = false;
    bool has_odd = false;
    for (const Bond& bond : model.bonds) {
        if (bond.a >= scope.first_site && bond.b <= scope.last_site) {
            (bond.parity == BondParity::Even ? has_even : has_odd) = true;
        }
    }
    const bool has_field = model.site_term().has_value();
    const double dt = block.duration;
    if (has_field) {
        out.push_back({LayerKind::Local1Q, dt / 2.0, block.scope_node, -1});
    }
    if (has_even) {
        out.push_back({LayerKind::EvenBonds, dt / 2.0, block.scope_node, -1});
    }
    if (has_odd) {
        out.push_back({LayerKind::OddBonds, dt, block.scope_node, -1});
    }
    if (has_even) {
        out.push_back({LayerKind::EvenBonds, dt / 2.0, block.scope_node, -1});
    }
    if (has_field) {
        out.push_back({LayerKind::Local1Q, dt / 2.0, block.scope_node, -1});
    }
}

}  // namespace

std::vector<Layer> expand_layers(const ChainModel& model, const std::vector<Layer>& layers) {
    std::vector<Layer> out;
    // A partition is only needed to resolve node scopes; rebuild it lazily
    // from the largest node index seen.
    int max_node = -1;
    for (const Layer& layer : layers) {
        max_node = std::max(max_node, layer.scope_node);
    }
    Partition partition;
    const Partition* part_ptr = nullptr;
    if (max_node >= 0) {
        partition = build_partition(model, max_node + 1);
        part_ptr = &partition;
    }
    for (const Layer& layer : layers) {
        if (layer.kind == LayerKind::LocalBlock) {
            expand_block(model, part_ptr, layer, out);
        } else {
            out.push_back(layer);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Compiled execution
// ---------------------------------------------------------------------------

namespace {

enum class OpKind : unsigned char { XY, ZZ, XRot, Dense1, Dense2, Snapshot };

struct GateOp {
    OpKind kind;
    int pa = -1;
    int pb = -1;
    double c = 0.0;
    double s = 0.0;
    c64 phase_eq{};
    c64 phase_ne{};
    std::array<c64, 16> u{};
    std::size_t snap_index = 0;
};

GateOp bond_op(const ChainModel& model, const Bond& bond, double duration, bool dense) {
    GateOp op;
    op.pa = bond.a;
    op.pb = bond.b;
    if (model.kind == ModelKind::XY) {
        if (dense) {
            op.kind = OpKind::Dense2;
            const Mat4 u = exp_xy(model.coupling, duration);
            for (int r = 0; r < 4; ++r) {
                for (int col = 0; col < 4; ++col) {
                    op.u[r * 4 + col] = u(r, col);
                }
            }
        } else {
            op.kind = OpKind::XY;
            op.c = std::cos(2.0 * model.coupling * duration);
            op.s = std::sin(2.0 * model.coupling * duration);
        }
    } else {
        if (dense) {
            op.kind = OpKind::Dense2;
            const Mat4 u = exp_zz(model.coupling, duration);
            for (int r = 0; r < 4; ++r) {
                for (int col = 0; col < 4; ++col) {
                    op.u[r * 4 + col] = u(r, col);
                }
            }
        } else {
            op.kind = OpKind::ZZ;
            const double angle = model.coupling * duration;
            op.phase_eq = c64{std::cos(angle), std::sin(angle)};
            op.phase_ne = std::conj(op.phase_eq);
        }
    }
    return op;
}

GateOp field_op(const ChainModel& model, int site, double duration, bool dense) {
    GateOp op;
    op.pa = site;
    const double angle = model.field * duration;
    if (dense) {
        op.kind = OpKind::Dense1;
        const Mat2 u = exp_x(model.field, duration);
        op.u[0] = u(0, 0);
        op.u[1] = u(0, 1);
        op.u[2] = u(1, 0);
        op.u[3] = u(1, 1);
    } else {
        op.kind = OpKind::XRot;
        op.c = std::cos(angle);
        op.s = std::sin(angle);
    }
    return op;
}

}  // namespace

namespace detail {
struct CompiledOps {
    std::vector<GateOp> ops;
    int auto_split = 0;
};
}  // namespace detail

namespace {

detail::CompiledOps compile_schedule(const Schedule& schedule, const ChainModel& model,
                                     bool dense) {
    int max_node = -1;
    for (const Layer& layer : schedule.layers) {
        max_node = std::max(max_node, layer.scope_node);
    }
    Partition partition;
    const Partition* part_ptr = nullptr;
    if (max_node >= 0) {
        partition = build_partition(model, max_node + 1);
        part_ptr = &partition;
    }

    detail::CompiledOps compiled;
    // Preferred low/high split: near L-8 (empirically the best chunk/tile
    // balance), snapped down to a node boundary so node-local gates never
    // straddle it.
    {
        const int target = std::clamp(model.num_sites - 8, 2, model.num_sites - 2);
        int split = target;
        if (part_ptr != nullptr && partition.num_nodes > 1) {
            split = target - target % partition.sites_per_node;
            if (split < partition.sites_per_node) {
                split = partition.sites_per_node;
            }
        }
        compiled.auto_split = split;
    }
    const bool has_field = model.site_term().has_value();
    std::size_t snap_cursor = 0;
    const auto emit_snapshots_at = [&](std::size_t layer_pos) {
        while (snap_cursor < schedule.snapshots.size() &&
               schedule.snapshots[snap_cursor].layer_pos == layer_pos) {
            GateOp op;
            op.kind = OpKind::Snapshot;
            op.snap_index = snap_cursor;
            compiled.ops.push_back(op);
            ++snap_cursor;
        }
    };

    std::vector<Layer> atomic;
    for (std::size_t pos = 0; pos < schedule.layers.size(); ++pos) {
        emit_snapshots_at(pos);
        const Layer& layer = schedule.layers[pos];
        atomic.clear();
        if (layer.kind == LayerKind::LocalBlock) {
            expand_block(model, part_ptr, layer, atomic);
        } else {
            atomic.push_back(layer);
        }
        for (const Layer& al : atomic) {
            switch (al.kind) {
                case LayerKind::Local1Q: {
                    if (!has_field) {
                        break;
                    }
                    const Scope scope = layer_scope(model, part_ptr, al);
                    for (int site = scope.first_site; site <= scope.last_site; ++site) {
                        compiled.ops.push_back(field_op(model, site, al.duration, dense));
                    }
                    break;
                }
                case LayerKind::EvenBonds:
                case LayerKind::OddBonds: {
                    const Scope scope = layer_scope(model, part_ptr, al);
                    const BondParity parity =
                        al.kind == LayerKind::EvenBonds ? BondParity::Even : BondParity::Odd;
                    for (const Bond& bond : model.bonds) {
                        if (bond.parity == parity && bond.a >= scope.first_site &&
                            bond.b <= scope.last_site) {
                            compiled.ops.push_back(bond_op(model, bond, al.duration, dense));
                        }
                    }
                    break;
                }
                case LayerKind::CutBond: {
                    if (al.bond < 0 || al.bond >= static_cast<int>(model.bonds.size())) {
                        throw std::invalid_argument("execute: cut-bond layer references bond " +
                                                    std::to_string(al.bond) +
                                                    " outside the model");
                    }
                    compiled.ops.push_back(bond_op(model, model.bonds[al.bond], al.duration,
                                                   dense));
                    break;
                }
                case LayerKind::LocalBlock:
                    throw std::logic_error("execute: nested LocalBlock after expansion");
            }
        }
    }
    emit_snapshots_at(schedule.layers.size());
    return compiled;
}

void apply_gate(const GateOp& op, c64* amps, std::size_t dim,
                const detail::IndexRange& range = detail::IndexRange::full()) {
    switch (op.kind) {
        case OpKind::XY:
            detail::apply_xy(amps, dim, op.pa, op.pb, op.c, op.s, range);
            break;
        case OpKind::ZZ:
            detail::apply_zz(amps, dim, op.pa, op.pb, op.phase_eq, range);
            break;
        case OpKind::XRot:
            detail::apply_x_rot(amps, dim, op.pa, op.c, op.s, range);
            break;
        case OpKind::Dense1:
            detail::apply_1q_dense(amps, dim, op.pa, op.u.data(), range);
            break;
        case OpKind::Dense2:
            detail::apply_2q_dense(amps, dim, op.pa, op.pb, op.u.data(), range);
            break;
        case OpKind::Snapshot:
            break;
    }
}

enum class OpClass { Low, High, Straddle };

OpClass classify(const GateOp& op, int split_bits) {
    const int hi_bit = std::max(op.pa, op.pb);
    const int lo_bit = op.pb < 0 ? op.pa : std::min(op.pa, op.pb);
    if (hi_bit < split_bits) {
        return OpClass::Low;
    }
    if (lo_bit >= split_bits) {
        return OpClass::High;
    }
    return OpClass::Straddle;
}

// Cache-blocked executor. Gates acting entirely below the split are run
// chunk-by-chunk on contiguous subarrays; gates entirely above it are run
// tile-by-tile over column ranges. Gates of one class keep their relative
// order and the two classes act on disjoint bits, so the reordering is
// exact up to floating-point rounding.
class GroupedRunner {
  public:
    GroupedRunner(c64* amps, std::size_t dim, int split_bits)
        : amps_(amps), dim_(dim), split_(split_bits) {
        const std::size_t rows = dim_ >> split_;
        const std::size_t target_bytes = std::size_t{1} << 23;
        tile_cols_ = std::max<std::size_t>(8, target_bytes / (rows * sizeof(c64)));
        tile_cols_ = std::min(tile_cols_, std::size_t{1} << split_);
    }

    void push(const GateOp& op) {
        switch (classify(op, split_)) {
            case OpClass::Low:
                low_.push_back(&op);
                break;
            case OpClass::High:
                high_.push_back(&op);
                break;
            case OpClass::Straddle:
                flush();
                apply_gate(op, amps_, dim_);
                break;
        }
    }

    void flush() {
        if (!low_.empty()) {
            const std::size_t chunk = std::size_t{1} << split_;
            for (std::size_t base = 0; base < dim_; base += chunk) {
                for (const GateOp* op : low_) {
                    apply_gate(*op, amps_ + base, chunk);
                }
            }
            low_.clear();
        }
        if (!high_.empty()) {
            const std::size_t cols = std::size_t{1} << split_;
            for (std::size_t c0 = 0; c0 < cols; c0 += tile_cols_) {
                const detail::IndexRange range{c0, std::min(c0 + tile_cols_, cols), split_};
                for (const GateOp* op : high_) {
                    apply_gate(*op, amps_, dim_, range);
                }
            }
            high_.clear();
        }
    }

  private:
    c64* amps_;
    std::size_t dim_;
    int split_;
    std::size_t tile_cols_;
    std::vector<const GateOp*> low_;
    std::vector<const GateOp*> high_;
};

}  // namespace

// ---------------------------------------------------------------------------
// ScheduleRunner / execute
// ---------------------------------------------------------------------------

namespace {

// Executes ops[begin..) until the snapshot marker with the given index is
// consumed (or the stream ends); returns the new cursor.
std::size_t run_ops(const std::vector<GateOp>& ops, std::size_t begin, StateVector& state,
                    std::size_t target_snap_index, bool grouped, int split_bits) {
    c64* amps = state.amplitudes().data();
    const std::size_t dim = state.dim();
    if (grouped) {
        GroupedRunner runner(amps, dim, split_bits);
        for (std::size_t i = begin; i < ops.size(); ++i) {
            if (ops[i].kind == OpKind::Snapshot) {
                runner.flush();
                if (ops[i].snap_index == target_snap_index) {
                    return i + 1;
                }
                continue;
            }
            runner.push(ops[i]);
        }
        runner.flush();
        return ops.size();
    }
    for (std::size_t i = begin; i < ops.size(); ++i) {
        if (ops[i].kind == OpKind::Snapshot) {
            if (ops[i].snap_index == target_snap_index) {
                return i + 1;
            }
            continue;
        }
        apply_gate(ops[i], amps, dim);
    }
    return ops.size();
}

}  // namespace

ScheduleRunner::ScheduleRunner(const ChainModel& model, const Schedule& schedule,
                               StateVector initial, ExecOptions options)
    : options_(options), state_(std::move(initial)) {
    if (state_.num_sites() != model.num_sites) {
        throw std::invalid_argument("ScheduleRunner: state/model size mismatch");
    }
    times_ = schedule.snapshot_times();
    ops_ = std::make_shared<const detail::CompiledOps>(
        compile_schedule(schedule, model, options.use_dense_gates));
}

bool ScheduleRunner::grouped() const {
    const int split = options_.split_bits > 0 ? options_.split_bits : ops_->auto_split;
    return state_.num_sites() >= options_.min_grouped_sites && split > 0 &&
           split < state_.num_sites();
}

void ScheduleRunner::advance_to_snapshot(std::size_t snap_idx) {
    if (snap_idx >= times_.size()) {
        throw std::invalid_argument("advance_to_snapshot: snapshot index out of range");
    }
    if (snap_idx < snap_pos_) {
        throw std::invalid_argument("advance_to_snapshot: snapshots must be visited in order");
    }
    const int split = options_.split_bits > 0 ? options_.split_bits : ops_->auto_split;
    op_pos_ = run_ops(ops_->ops, op_pos_, state_, snap_idx, grouped(), split);
    snap_pos_ = snap_idx + 1;
}

void ScheduleRunner::finish() {
    const int split = options_.split_bits > 0 ? options_.split_bits : ops_->auto_split;
    op_pos_ = run_ops(ops_->ops, op_pos_, state_, std::numeric_limits<std::size_t>::max(),
                      grouped(), split);
}

void execute(const Schedule& schedule, const ChainModel& model, StateVector& state,
             const SnapshotFn& on_snapshot, const ExecOptions& options) {
    ScheduleRunner runner(model, schedule, std::move(state), options);
    for (std::size_t i = 0; i < runner.snapshot_count(); ++i) {
        runner.advance_to_snapshot(i);
        if (on_snapshot) {
            on_snapshot(runner.snapshot_times()[i], runner.state());
        }
    }
    runner.finish();
    state = std::move(runner).take_state();
}

// ---------------------------------------------------------------------------
// Audit / serialization
// ---------------------------------------------------------------------------

TimeAudit audit_schedule(const Schedule& schedule, const ChainModel& model) {
    int max_node = -1;
    for (const Layer& layer : schedule.layers) {
        max_node = std::max(max_node, layer.scope_node);
    }
    Partition partition;
    const Partition* part_ptr = nullptr;
    if (max_node >= 0) {
        partition = build_partition(model, max_node + 1);
        part_ptr = &partition;
    }
    TimeAudit audit;
    audit.site_local_time.assign(model.num_sites, 0.0);
    audit.cut_bond_time.assign(model.bonds.size(), 0.0);
    for (const Layer& layer : schedule.layers) {
        if (layer.kind == LayerKind::LocalBlock) {
            const Scope scope = layer_scope(model, part_ptr, layer);
            for (int site = scope.first_site; site <= scope.last_site; ++site) {
                audit.site_local_time[site] += layer.duration;
            }
        } else if (layer.kind == LayerKind::CutBond) {
            audit.cut_bond_time[layer.bond] += layer.duration;
        }
    }
    return audit;
}

std::string to_text(const Schedule& schedule) {
    std::string out;
    char line[128];
    for (const Layer& layer : schedule.layers) {
        const char* kind = nullptr;
        switch (layer.kind) {
            case LayerKind::Local1Q:
                kind = "Local1Q";
                break;
            case LayerKind::EvenBonds:
                kind = "EvenBonds";
                break;
            case LayerKind::OddBonds:
                kind = "OddBonds";
                break;
            case LayerKind::CutBond:
                kind = "CutBond";
                break;
            case LayerKind::LocalBlock:
                kind = "LocalBlock";
                break;
        }
        if (layer.kind == LayerKind::CutBond) {
            std::snprintf(line, sizeof(line), "%s bond=%d %.17g\n", kind, layer.bond,
                          layer.duration);
        } else if (layer.scope_node < 0) {
            std::snprintf(line, sizeof(line), "%s chain %.17g\n", kind, layer.duration);
        } else {
            std::snprintf(line, sizeof(line), "%s node=%d %.17g\n", kind, layer.scope_node,
                          layer.duration);
        }
        out += line;
    }
    return out;
}

}  // namespace dqsim
