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

#include <doctest.h>

#include <algorithm>
#include <tuple>
#include <cmath>
#include <random>

#include "dqsim/exact.hpp"
#include "dqsim/observables.hpp"
#include "dqsim/trotter.hpp"
#include "test_helpers.hpp"

using namespace dqsim;
using dqsim::testing::max_amp_diff;
using dqsim::testing::random_state;

namespace {

std::vector<Layer> gates_of(const ChainModel& model, const Schedule& sched) {
    return expand_layers(model, sched.layers);
}

}  // namespace

TEST_CASE("uniform schedule expands to the symmetric 5-layer block") {
    SUBCASE("TFI block: Local1Q, Even, Odd, Even, Local1Q") {
        const ChainModel m = build_model(ModelKind::TFI, 4, 1.0, 0.5);
        const Schedule sched = build_uniform(m, 1, 0.2);
        const std::vector<Layer> atomic = gates_of(m, sched);
        REQUIRE(atomic.size() == 5);
        CHECK(atomic[0].kind == LayerKind::Local1Q);
        CHECK(atomic[0].duration == doctest::Approx(0.1));
        CHECK(atomic[1].kind == LayerKind::EvenBonds);
        CHECK(atomic[1].duration == doctest::Approx(0.1));
        CHECK(atomic[2].kind == LayerKind::OddBonds);
        CHECK(atomic[2].duration == doctest::Approx(0.2));
        CHECK(atomic[3].kind == LayerKind::EvenBonds);
        CHECK(atomic[4].kind == LayerKind::Local1Q);
    }
    SUBCASE("XY block omits the field layers") {
        const ChainModel m = build_model(ModelKind::XY, 4, 1.0, 0.0);
        const Schedule sched = build_uniform(m, 1, 0.2);
        const std::vector<Layer> atomic = gates_of(m, sched);
        REQUIRE(atomic.size() == 3);
        CHECK(atomic[0].kind == LayerKind::EvenBonds);
        CHECK(atomic[1].kind == LayerKind::OddBonds);
        CHECK(atomic[2].kind == LayerKind::EvenBonds);
    }
    SUBCASE("palindromic block structure") {
        const ChainModel m = build_model(ModelKind::TFI, 6, 1.0, 2.0);
        const Schedule sched = build_uniform(m, 1, 0.34);
        std::vector<Layer> atomic = gates_of(m, sched);
        std::vector<Layer> reversed(atomic.rbegin(), atomic.rend());
        REQUIRE(atomic.size() == reversed.size());
        for (std::size_t i = 0; i < atomic.size(); ++i) {
            CHECK(atomic[i].kind == reversed[i].kind);
            CHECK(atomic[i].duration == reversed[i].duration);
        }
    }
    SUBCASE("per-site local time accumulates to t for any N") {
        const ChainModel m = build_model(ModelKind::XY, 6, 1.0, 0.0);
        const Schedule sched = build_uniform(m, 7, 1.4);
        const TimeAudit audit = audit_schedule(sched, m);
        for (double t : audit.site_local_time) {
            CHECK(t == doctest::Approx(1.4).epsilon(1e-12));
        }
    }
}

TEST_CASE("sparse schedule structure") {
    const ChainModel m = build_model(ModelKind::XY, 8, 1.0, 0.0);
    const Partition p = build_partition(m, 2);
    SUBCASE("N=10, n=2, k=2, t=1: five macro steps of [local, cut(0.2), local]") {
        const Schedule sched = build_sparse(m, p, 10, 2, 1.0);
        // Per macro: 1 local block per node, one cut layer, 1 local block per node.
        REQUIRE(sched.layers.size() == 5 * (2 + 1 + 2));
        const TimeAudit audit = audit_schedule(sched, m);
        for (double t : audit.site_local_time) {
            CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(audit.cut_bond_time[3] == doctest::Approx(1.0).epsilon(1e-12));
        int cut_layers = 0;
        for (const Layer& l : sched.layers) {
            if (l.kind == LayerKind::CutBond) {
                CHECK(l.duration == doctest::Approx(0.2));
                ++cut_layers;
            }
        }
        CHECK(cut_layers == 5);
        CHECK(sched.snapshots.size() == 5);
    }
    SUBCASE("n=1 is rejected; uniform covers that case") {
        CHECK_THROWS_AS((void)build_sparse(m, p, 10, 1, 1.0), std::invalid_argument);
    }
    SUBCASE("odd n is rejected") {
        CHECK_THROWS_AS((void)build_sparse(m, p, 9, 3, 1.0), std::invalid_argument);
    }
    SUBCASE("N not divisible by n is rejected") {
        CHECK_THROWS_AS((void)build_sparse(m, p, 10, 4, 1.0), std::invalid_argument);
    }
    SUBCASE("single-node partition is rejected") {
        const Partition p1 = build_partition(m, 1);
        CHECK_THROWS_AS((void)build_sparse(m, p1, 10, 2, 1.0), std::invalid_argument);
    }
    SUBCASE("L=24, k=2, n=4, t=10: 25 macro steps, 25 interconnect uses") {
        const ChainModel m24 = build_model(ModelKind::XY, 24, 1.0, 0.0);
        const Partition p2 = build_partition(m24, 2);
        const Schedule sched = build_sparse(m24, p2, 100, 4, 10.0);
        int cut_layers = 0;
        for (const Layer& l : sched.layers) {
            cut_layers += l.kind == LayerKind::CutBond ? 1 : 0;
        }
        CHECK(cut_layers == 25);
        CHECK(sched.snapshots.size() == 25);
        CHECK(sched.snapshots.back().time == 10.0);
    }
    SUBCASE("snapshot callback fires at every step time") {
        const ChainModel m6 = build_model(ModelKind::XY, 6, 1.0, 0.0);
        StateVector psi = initial_state(m6);
        std::vector<double> seen;
        execute(build_uniform(m6, 5, 1.0), m6, psi,
                [&](double t, const StateVector&) { seen.push_back(t); });
        REQUIRE(seen.size() == 5);
        for (int i = 0; i < 5; ++i) {
            CHECK(seen[i] == doctest::Approx(0.2 * (i + 1)).epsilon(1e-12));
        }
        CHECK(seen.back() == 1.0);
    }
    SUBCASE("executing applies exactly (k-1) N/n cut gates") {
        const ChainModel m18 = build_model(ModelKind::XY, 12, 1.0, 0.0);
        const Partition p3 = build_partition(m18, 3);
        const Schedule sched = build_sparse(m18, p3, 12, 4, 1.2);
        int cut_gates = 0;
        for (const Layer& l : sched.layers) {
            cut_gates += l.kind == LayerKind::CutBond ? 1 : 0;
        }
        CHECK(cut_gates == 2 * 3);
    }
    SUBCASE("sparse n=2 vs uniform: same per-bond gate durations, cut layers aside") {
        const Schedule uniform = build_uniform(m, 10, 1.0);
        const Schedule sparse = build_sparse(m, p, 10, 2, 1.0);
        const TimeAudit ua = audit_schedule(uniform, m);
        const TimeAudit sa = audit_schedule(sparse, m);
        for (int site = 0; site < m.num_sites; ++site) {
            CHECK(ua.site_local_time[site] == doctest::Approx(sa.site_local_time[site]));
        }
        // The uniform schedule evolves the future cut bond inside its blocks.
        CHECK(ua.cut_bond_time[3] == 0.0);
        CHECK(sa.cut_bond_time[3] == doctest::Approx(1.0));
    }
}

TEST_CASE("execute against the dense evolution oracle") {
    SUBCASE("empty schedule leaves the state untouched") {
        const ChainModel m = build_model(ModelKind::XY, 4, 1.0, 0.0);
        Schedule empty;
        StateVector psi = initial_state(m);
        const StateVector before = psi;
        execute(empty, m, psi);
        CHECK(max_amp_diff(psi, before) == 0.0);
    }
    SUBCASE("uniform N=100, t=10 on L=4 XY reaches fidelity 1-1e-3 vs exact") {
        const ChainModel m = build_model(ModelKind::XY, 4, 1.0, 0.0);
        StateVector psi = initial_state(m);
        execute(build_uniform(m, 100, 10.0), m, psi);
        const StateVector target = exact::evolve(m, initial_state(m), 10.0);
        CHECK(fidelity(psi, target) > 1.0 - 1e-3);
    }
    SUBCASE("dense-gate path and specialized kernels agree") {
        for (auto kind : {ModelKind::XY, ModelKind::TFI}) {
            const ChainModel m =
                build_model(kind, 6, 1.0, kind == ModelKind::TFI ? 2.0 : 0.0);
            const Partition p = build_partition(m, 2);
            const Schedule sched = build_sparse(m, p, 8, 2, 0.8);
            StateVector fast = initial_state(m);
            StateVector slow = initial_state(m);
            execute(sched, m, fast);
            ExecOptions dense;
            dense.use_dense_gates = true;
            execute(sched, m, slow, {}, dense);
            CHECK(max_amp_diff(fast, slow) < 1e-13);
        }
    }
    SUBCASE("grouped executor matches the plain one bit for bit-joint tolerance") {
        std::mt19937_64 rng(17);
        for (auto kind : {ModelKind::XY, ModelKind::TFI}) {
            const ChainModel m =
                build_model(kind, 10, 1.0, kind == ModelKind::TFI ? 0.5 : 0.0);
            const Partition p = build_partition(m, 2);
            StateVector a = random_state(10, rng);
            StateVector b = a;
            const Schedule sched = build_sparse(m, p, 12, 4, 1.2);
            ExecOptions plain;
            plain.min_grouped_sites = 99;
            execute(sched, m, a, {}, plain);
            ExecOptions grouped;
            grouped.min_grouped_sites = 2;
            grouped.split_bits = 5;
            execute(sched, m, b, {}, grouped);
            CHECK(max_amp_diff(a, b) < 1e-12);
        }
    }
    SUBCASE("second-order convergence on a small chain") {
        const ChainModel m = build_model(ModelKind::XY, 6, 1.0, 0.0);
        const StateVector target = exact::evolve(m, initial_state(m), 1.0);
        std::vector<double> dts{0.2, 0.1, 0.05, 0.025};
        std::vector<double> infidelity;
        for (double dt : dts) {
            StateVector psi = initial_state(m);
            execute(build_uniform(m, static_cast<int>(std::lround(1.0 / dt)), 1.0), m, psi);
            infidelity.push_back(1.0 - fidelity(psi, target));
        }
        // Least-squares slope of log(1-F) vs log(dt).
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < dts.size(); ++i) {
            const double x = std::log(dts[i]);
            const double y = std::log(infidelity[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(dts.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(slope == doctest::Approx(4.0).epsilon(0.2));
    }
}

TEST_CASE("draw_cut_steps") {
    SUBCASE("zero variance gives mu-sized steps plus an exact remainder") {
        std::mt19937_64 rng(1);
        const StochasticParams params{0.3, 0.0, 0, 0.3};
        const std::vector<double> steps = draw_cut_steps(params, 1.0, 0.1, rng);
        REQUIRE(steps.size() == 4);
        CHECK(steps[0] == doctest::Approx(0.3));
        CHECK(steps[1] == doctest::Approx(0.3));
        CHECK(steps[2] == doctest::Approx(0.3));
        CHECK(steps[3] == doctest::Approx(0.1));
        double sum = 0.0;
        for (double s : steps) {
            sum += s;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("all steps honor the dt_ref floor except the adjusted last one") {
        std::mt19937_64 rng(2);
        const StochasticParams params{0.3, 0.12, 0, 0.3};
        for (int round = 0; round < 200; ++round) {
            const std::vector<double> steps = draw_cut_steps(params, 10.0, 0.1, rng);
            double sum = 0.0;
            for (std::size_t i = 0; i < steps.size(); ++i) {
                CHECK(steps[i] > 0.0);
                if (i + 1 < steps.size()) {
                    CHECK(steps[i] >= 0.1);
                }
                sum += steps[i];
            }
            CHECK(sum == doctest::Approx(10.0).epsilon(1e-12));
        }
    }
    SUBCASE("a fixed seed reproduces the sequence") {
        const StochasticParams params{0.3, 0.12, 0, 0.3};
        std::mt19937_64 rng_a(42);
        std::mt19937_64 rng_b(42);
        CHECK(draw_cut_steps(params, 10.0, 0.1, rng_a) ==
              draw_cut_steps(params, 10.0, 0.1, rng_b));
    }
    SUBCASE("t1 outside (0, t_end) is rejected") {
        std::mt19937_64 rng(3);
        CHECK_THROWS_AS((void)draw_cut_steps({0.3, 0.0, 0, 0.0}, 1.0, 0.1, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)draw_cut_steps({0.3, 0.0, 0, 1.5}, 1.0, 0.1, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("stochastic schedule construction") {
    SUBCASE("zero variance with mu = n*dt_ref reproduces the sparse scheme") {
        const ChainModel m = build_model(ModelKind::XY, 8, 1.0, 0.0);
        const Partition p = build_partition(m, 2);
        const Schedule sparse = build_sparse(m, p, 10, 2, 1.0);
        const Schedule stoch =
            build_stochastic(m, p, StochasticParams::with_default_t1(0.2, 0.0, 7), 0.1, 1.0);
        // The stochastic form accumulates each macro's trailing half-fill
        // into the next event's leading fill, so the layer sequences agree
        // only as multisets of commuting blocks; the evolved states must
        // coincide.
        const auto layer_key = [](const Layer& l) {
            return std::make_tuple(static_cast<int>(l.kind), l.scope_node, l.bond, l.duration);
        };
        auto a = sparse.layers;
        auto b = stoch.layers;
        REQUIRE(a.size() == b.size());
        std::sort(a.begin(), a.end(),
                  [&](const Layer& x, const Layer& y) { return layer_key(x) < layer_key(y); });
        std::sort(b.begin(), b.end(),
                  [&](const Layer& x, const Layer& y) { return layer_key(x) < layer_key(y); });
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].kind == b[i].kind);
            CHECK(a[i].scope_node == b[i].scope_node);
            CHECK(a[i].bond == b[i].bond);
            CHECK(a[i].duration == doctest::Approx(b[i].duration).epsilon(1e-12));
        }
        StateVector via_sparse = initial_state(m);
        StateVector via_stoch = initial_state(m);
        execute(sparse, m, via_sparse);
        execute(stoch, m, via_stoch);
        CHECK(max_amp_diff(via_sparse, via_stoch) < 1e-12);
    }
    SUBCASE("explicit step lists: equal keys need no extra fills (3 nodes)") {
        const ChainModel m = build_model(ModelKind::XY, 6, 1.0, 0.0);
        const Partition p = build_partition(m, 3);
        // Both bonds advance with the same cadence: after each pair of cut
        // events the adjacent node clocks already match the next key.
        const std::vector<std::vector<double>> steps{{0.2, 0.4, 0.4}, {0.2, 0.4, 0.4}};
        const Schedule sched = build_stochastic_from_steps(m, p, steps, 0.1, 1.0);
        // Middle node (node 1) touches both bonds; at each bulk event pair
        // it is filled once before the first bond's gate and needs no fill
        // before the second bond's gate.
        int consecutive_cuts = 0;
        int max_consecutive_cuts = 0;
        for (const Layer& l : sched.layers) {
            if (l.kind == LayerKind::CutBond) {
                ++consecutive_cuts;
                max_consecutive_cuts = std::max(max_consecutive_cuts, consecutive_cuts);
            } else {
                consecutive_cuts = 0;
            }
        }
        CHECK(max_consecutive_cuts == 2);
        const TimeAudit audit = audit_schedule(sched, m);
        for (double t : audit.site_local_time) {
            CHECK(t == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("per-node and per-cut-bond times reach t_end for random seeds") {
        const ChainModel m = build_model(ModelKind::XY, 12, 1.0, 0.0);
        const Partition p = build_partition(m, 3);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Schedule sched = build_stochastic(
                m, p, StochasticParams::with_default_t1(0.3, 0.12, seed), 0.1, 10.0);
            const TimeAudit audit = audit_schedule(sched, m);
            for (double t : audit.site_local_time) {
                CHECK(t == doctest::Approx(10.0).epsilon(1e-9));
            }
            for (int cut : p.cut_bonds) {
                CHECK(audit.cut_bond_time[cut] == doctest::Approx(10.0).epsilon(1e-9));
            }
            CHECK(sched.meta.cut_steps.size() == 2);
        }
    }
    SUBCASE("identical seeds give identical schedules") {
        const ChainModel m = build_model(ModelKind::XY, 8, 1.0, 0.0);
        const Partition p = build_partition(m, 2);
        const auto params = StochasticParams::with_default_t1(0.3, 0.08, 1234);
        const Schedule a = build_stochastic(m, p, params, 0.1, 5.0);
        const Schedule b = build_stochastic(m, p, params, 0.1, 5.0);
        CHECK(to_text(a) == to_text(b));
        REQUIRE(a.layers.size() == b.layers.size());
        for (std::size_t i = 0; i < a.layers.size(); ++i) {
            CHECK(a.layers[i].duration == b.layers[i].duration);
        }
    }
    SUBCASE("final snapshot lands exactly on t_end") {
        const ChainModel m = build_model(ModelKind::XY, 8, 1.0, 0.0);
        const Partition p = build_partition(m, 2);
        const Schedule sched =
            build_stochastic(m, p, StochasticParams::with_default_t1(0.3, 0.12, 5), 0.1, 10.0);
        REQUIRE(!sched.snapshots.empty());
        CHECK(sched.snapshots.back().time == 10.0);
        CHECK(sched.snapshots.back().layer_pos == sched.layers.size());
    }
}

TEST_CASE("schedule text dump is stable and layer-per-line") {
    const ChainModel m = build_model(ModelKind::XY, 4, 1.0, 0.0);
    const Partition p = build_partition(m, 2);
    const Schedule sched = build_sparse(m, p, 4, 2, 0.4);
    const std::string text = to_text(sched);
    CHECK(text ==
          "LocalBlock node=0 0.10000000000000001\n"
          "LocalBlock node=1 0.10000000000000001\n"
          "CutBond bond=1 0.20000000000000001\n"
          "LocalBlock node=0 0.10000000000000001\n"
          "LocalBlock node=1 0.10000000000000001\n"
          "LocalBlock node=0 0.10000000000000001\n"
          "LocalBlock node=1 0.10000000000000001\n"
          "CutBond bond=1 0.20000000000000001\n"
          "LocalBlock node=0 0.10000000000000001\n"
          "LocalBlock node=1 0.10000000000000001\n");
}
