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

#include "dqsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dqsim {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kGridEps = 1e-9;

int steps_for(double t_end, double dt, const char* what) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument(std::string("config: ") + what + " must be positive");
    }
    const long n = std::lround(t_end / dt);
    if (n < 1) {
        throw std::invalid_argument(std::string("config: ") + what +
                                    " exceeds t_end; no steps fit");
    }
    return static_cast<int>(n);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        const auto& m = j.at("model");
        const std::string kind = m.at("kind").get<std::string>();
        if (kind == "xy") {
            cfg.kind = ModelKind::XY;
        } else if (kind == "tfi") {
            cfg.kind = ModelKind::TFI;
        } else {
            throw std::invalid_argument("config: model.kind must be \"xy\" or \"tfi\"");
        }
        cfg.num_sites = m.at("L").get<int>();
        cfg.coupling = m.value("J", 1.0);
        cfg.field = m.value("h", 0.0);

        const std::string scheme = j.at("scheme").get<std::string>();
        if (scheme == "uniform") {
            cfg.scheme = Scheme::Uniform;
        } else if (scheme == "sparse") {
            cfg.scheme = Scheme::Sparse;
        } else if (scheme == "stochastic") {
            cfg.scheme = Scheme::Stochastic;
        } else {
            throw std::invalid_argument(
                "config: scheme must be \"uniform\", \"sparse\" or \"stochastic\"");
        }
        cfg.t_end = j.at("t_end").get<double>();
        cfg.dt = j.value("dt", 0.0);
        cfg.exact_dt = j.value("exact_dt", false);
        cfg.num_nodes = j.value("k", 1);
        cfg.sparsity = j.value("n", 0);
        cfg.dt_ref = j.value("dt_ref", 0.1);
        cfg.mu = j.value("mu", 0.0);
        cfg.sigma = j.value("sigma", 0.0);
        cfg.ensemble_size = j.value("ensemble_size", 1);
        cfg.base_seed = j.value("base_seed", std::uint64_t{0});
        cfg.reference_dt = j.value("reference_dt", 0.1);
        cfg.snapshot_stride = j.value("snapshot_stride", 1);
        cfg.output_path = j.value("output", std::string{});
        if (j.contains("observables")) {
            cfg.want_fidelity = false;
            for (const auto& name : j.at("observables")) {
                const std::string s = name.get<std::string>();
                if (s == "fidelity") {
                    cfg.want_fidelity = true;
                } else if (s == "magnetization") {
                    cfg.want_magnetization = true;
                } else if (s == "correlation") {
                    cfg.want_correlation = true;
                } else {
                    throw std::invalid_argument("config: unknown observable \"" + s + "\"");
                }
            }
        }
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_json_text() const {
    ordered_json j;
    j["model"] = {{"kind", kind == ModelKind::XY ? "xy" : "tfi"},
                  {"L", num_sites},
                  {"J", coupling},
                  {"h", field}};
    switch (scheme) {
        case Scheme::Uniform:
            j["scheme"] = "uniform";
            j["dt"] = dt;
            if (exact_dt) {
                j["exact_dt"] = true;
            }
            break;
        case Scheme::Sparse:
            j["scheme"] = "sparse";
            j["k"] = num_nodes;
            j["n"] = sparsity;
            j["dt_ref"] = dt_ref;
            break;
        case Scheme::Stochastic:
            j["scheme"] = "stochastic";
            j["k"] = num_nodes;
            j["dt_ref"] = dt_ref;
            j["mu"] = mu;
            j["sigma"] = sigma;
            j["ensemble_size"] = ensemble_size;
            j["base_seed"] = base_seed;
            break;
    }
    j["t_end"] = t_end;
    j["reference_dt"] = reference_dt;
    j["snapshot_stride"] = snapshot_stride;
    std::vector<std::string> obs;
    if (want_fidelity) {
        obs.emplace_back("fidelity");
    }
    if (want_magnetization) {
        obs.emplace_back("magnetization");
    }
    if (want_correlation) {
        obs.emplace_back("correlation");
    }
    j["observables"] = obs;
    if (!output_path.empty()) {
        j["output"] = output_path;
    }
    return j.dump();
}

void ExperimentConfig::validate() const {
    if (num_sites < 2) {
        throw std::invalid_argument("config: model.L must be at least 2");
    }
    if (kind == ModelKind::XY && field != 0.0) {
        throw std::invalid_argument("config: model.h must be 0 for the XY model");
    }
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("config: t_end must be positive");
    }
    if (snapshot_stride < 1) {
        throw std::invalid_argument("config: snapshot_stride must be at least 1");
    }
    (void)steps_for(t_end, reference_dt, "reference_dt");
    switch (scheme) {
        case Scheme::Uniform:
            (void)steps_for(t_end, dt, "dt");
            break;
        case Scheme::Sparse:
            if (num_nodes < 2) {
                throw std::invalid_argument("config: sparse scheme needs k >= 2");
            }
            if (sparsity < 2 || sparsity % 2 != 0) {
                throw std::invalid_argument("config: sparse scheme needs an even n >= 2");
            }
            (void)steps_for(t_end, dt_ref, "dt_ref");
            break;
        case Scheme::Stochastic:
            if (num_nodes < 2) {
                throw std::invalid_argument("config: stochastic scheme needs k >= 2");
            }
            if (!(mu > 0.0) || sigma < 0.0) {
                throw std::invalid_argument("config: stochastic scheme needs mu > 0, sigma >= 0");
            }
            if (ensemble_size < 1) {
                throw std::invalid_argument("config: ensemble_size must be at least 1");
            }
            (void)steps_for(t_end, dt_ref, "dt_ref");
            break;
    }
    if (num_sites % num_nodes != 0) {
        throw std::invalid_argument("config: L must be divisible by k");
    }
}

// ---------------------------------------------------------------------------
// Schedule construction per config
// ---------------------------------------------------------------------------

namespace {

// Sparse scheme generalized to step counts that are not a multiple of n:
// full macro steps followed by one shortened final macro, every snapshot
// taken at a synchronized macro boundary. Coincides with build_sparse
// whenever N divides evenly.
Schedule build_sparse_ragged(const ChainModel& model, const Partition& partition, int num_steps,
                             int sparsity, double t_end) {
    if (partition.num_nodes < 2) {
        throw std::invalid_argument("sparse scheme needs at least 2 compute nodes");
    }
    const double dt = t_end / num_steps;
    Schedule sched;
    sched.meta.scheme = Scheme::Sparse;
    sched.meta.num_steps = num_steps;
    sched.meta.sparsity = sparsity;
    sched.meta.dt = dt;
    sched.meta.dt_ref = dt;
    sched.meta.t_end = t_end;

    const auto emit_side = [&](double side) {
        for (int node = 0; node < partition.num_nodes; ++node) {
            const long full = std::lround(std::floor(side / dt + 1e-9));
            for (long s = 0; s < full; ++s) {
                sched.layers.push_back({LayerKind::LocalBlock, dt, node, -1});
            }
            const double remainder = side - static_cast<double>(full) * dt;
            if (remainder > 1e-12) {
                sched.layers.push_back({LayerKind::LocalBlock, remainder, node, -1});
            }
        }
    };

    int done = 0;
    while (done < num_steps) {
        const int macro = std::min(sparsity, num_steps - done);
        emit_side(macro * dt / 2.0);
        for (int cut : partition.cut_bonds) {
            sched.layers.push_back({LayerKind::CutBond, macro * dt, -1, cut});
        }
        emit_side(macro * dt / 2.0);
        done += macro;
        const double time = done == num_steps ? t_end : done * dt;
        sched.snapshots.push_back({sched.layers.size(), time});
    }
    return sched;
}

Schedule schedule_for(const ExperimentConfig& cfg, const ChainModel& model,
                      const Partition& partition, std::uint64_t seed) {
    switch (cfg.scheme) {
        case Scheme::Uniform: {
            if (cfg.exact_dt) {
                const int n = static_cast<int>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
                return build_uniform(model, n, n * cfg.dt);
            }
            return build_uniform(model, steps_for(cfg.t_end, cfg.dt, "dt"), cfg.t_end);
        }
        case Scheme::Sparse: {
            const int n_local = steps_for(cfg.t_end, cfg.dt_ref, "dt_ref");
            if (n_local % cfg.sparsity == 0) {
                return build_sparse(model, partition, n_local, cfg.sparsity, cfg.t_end);
            }
            return build_sparse_ragged(model, partition, n_local, cfg.sparsity, cfg.t_end);
        }
        case Scheme::Stochastic: {
            const StochasticParams params =
                StochasticParams::with_default_t1(cfg.mu, cfg.sigma, seed);
            return build_stochastic(model, partition, params, cfg.dt_ref, cfg.t_end);
        }
    }
    throw std::logic_error("schedule_for: unknown scheme");
}

// Indices (test, reference) of snapshot times matching within kGridEps.
std::vector<std::pair<std::size_t, std::size_t>> match_grids(
    const std::vector<double>& test_times, const std::vector<double>& ref_times) {
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    std::size_t r = 0;
    for (std::size_t t = 0; t < test_times.size(); ++t) {
        while (r < ref_times.size() && ref_times[r] < test_times[t] - kGridEps) {
            ++r;
        }
        if (r < ref_times.size() && std::abs(ref_times[r] - test_times[t]) <= kGridEps) {
            matches.emplace_back(t, r);
            ++r;
        }
    }
    return matches;
}

template <class Seq>
Seq strided(const Seq& seq, int stride) {
    if (stride <= 1 || seq.empty()) {
        return seq;
    }
    Seq out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i % static_cast<std::size_t>(stride) == 0 || i + 1 == seq.size()) {
            out.push_back(seq[i]);
        }
    }
    return out;
}

struct EngineRun {
    const ExperimentConfig* config;
    Schedule schedule;
    std::unique_ptr<ScheduleRunner> runner;
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    std::size_t next_match = 0;
    ExperimentResult result;
};

void record_observables(const ExperimentConfig& cfg, const StateVector& state, double time,
                        ExperimentResult& result) {
    if (!cfg.want_magnetization && !cfg.want_correlation) {
        return;
    }
    const SnapshotObservables obs = snapshot_observables(state);
    if (cfg.want_magnetization) {
        result.magnetization.times.push_back(time);
        result.magnetization.values.push_back(obs.magnetization);
    }
    if (cfg.want_correlation) {
        result.correlation.times.push_back(time);
        result.correlation.values.push_back(obs.correlation_row0);
    }
}

ExperimentResult run_ensemble(const ExperimentConfig& config);

}  // namespace

SweepResult run_shared_reference(const std::vector<ExperimentConfig>& configs) {
    if (configs.empty()) {
        throw std::invalid_argument("run_shared_reference: no configs given");
    }
    const ExperimentConfig& base = configs.front();
    for (const ExperimentConfig& cfg : configs) {
        cfg.validate();
        if (cfg.kind != base.kind || cfg.num_sites != base.num_sites ||
            cfg.coupling != base.coupling || cfg.field != base.field ||
            cfg.t_end != base.t_end || cfg.reference_dt != base.reference_dt) {
            throw std::invalid_argument(
                "run_shared_reference: configs must share model, t_end and reference_dt");
        }
        if (cfg.scheme == Scheme::Stochastic && cfg.ensemble_size > 1) {
            throw std::invalid_argument(
                "run_shared_reference: ensembles run through run(); sweep() dispatches them");
        }
    }

    const ChainModel model = build_model(base.kind, base.num_sites, base.coupling, base.field);

    const bool any_obs = std::any_of(configs.begin(), configs.end(), [](const auto& c) {
        return c.want_magnetization || c.want_correlation;
    });

    std::vector<EngineRun> runs(configs.size());
    double latest_end = base.t_end;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        EngineRun& run = runs[i];
        run.config = &configs[i];
        const Partition part =
            build_partition(model, configs[i].num_nodes > 1 ? configs[i].num_nodes : 1);
        run.schedule = schedule_for(configs[i], model, part, configs[i].base_seed);
        run.runner = std::make_unique<ScheduleRunner>(model, run.schedule, initial_state(model));
        run.result.config = configs[i];
        if (!run.schedule.snapshots.empty()) {
            latest_end = std::max(latest_end, run.schedule.snapshots.back().time);
        }
    }

    // The reference spans the longest test trajectory (exact-dt runs may
    // overshoot t_end by a partial step).
    const int n_ref = static_cast<int>(std::ceil(latest_end / base.reference_dt - 1e-9));
    const double ref_span =
        latest_end <= base.t_end + kGridEps ? base.t_end : n_ref * base.reference_dt;
    const Schedule ref_schedule = build_uniform(model, n_ref, ref_span);
    ScheduleRunner ref_runner(model, ref_schedule, initial_state(model));
    const std::vector<double>& ref_times = ref_runner.snapshot_times();

    SweepResult out;
    out.reference.config = base;
    out.reference.config.scheme = Scheme::Uniform;
    out.reference.config.dt = base.reference_dt;
    out.reference.config.want_magnetization = std::any_of(
        configs.begin(), configs.end(), [](const auto& c) { return c.want_magnetization; });
    out.reference.config.want_correlation = std::any_of(
        configs.begin(), configs.end(), [](const auto& c) { return c.want_correlation; });

    for (EngineRun& run : runs) {
        run.matches = strided(match_grids(run.schedule.snapshot_times(), ref_times),
                              run.config->snapshot_stride);
    }

    for (std::size_t r = 0; r < ref_times.size(); ++r) {
        ref_runner.advance_to_snapshot(r);
        if (any_obs) {
            record_observables(out.reference.config, ref_runner.state(), ref_times[r],
                               out.reference);
        }
        out.reference.fidelity.times.push_back(ref_times[r]);
        out.reference.fidelity.values.push_back({1.0});

        for (EngineRun& run : runs) {
            while (run.next_match < run.matches.size() &&
                   run.matches[run.next_match].second == r) {
                run.runner->advance_to_snapshot(run.matches[run.next_match].first);
                const double time = ref_times[r];
                if (run.config->want_fidelity) {
                    run.result.fidelity.times.push_back(time);
                    run.result.fidelity.values.push_back(
                        {fidelity(ref_runner.state(), run.runner->state())});
                }
                record_observables(*run.config, run.runner->state(), time, run.result);
                ++run.next_match;
            }
        }
    }
    ref_runner.finish();
    for (EngineRun& run : runs) {
        run.runner->finish();
        out.runs.push_back(std::move(run.result));
    }
    return out;
}

ExperimentResult run(const ExperimentConfig& config) {
    config.validate();
    if (config.scheme == Scheme::Stochastic && config.ensemble_size > 1) {
        return run_ensemble(config);
    }
    return run_shared_reference({config}).runs.front();
}

SweepResult sweep(const ExperimentConfig& base, SweepParameter parameter,
                  const std::vector<double>& values) {
    if (values.empty()) {
        throw std::invalid_argument("sweep: no values given");
    }
    std::vector<ExperimentConfig> configs;
    configs.reserve(values.size());
    for (double v : values) {
        ExperimentConfig cfg = base;
        switch (parameter) {
            case SweepParameter::Sparsity:
                cfg.sparsity = static_cast<int>(std::lround(v));
                break;
            case SweepParameter::Dt:
                cfg.dt = v;
                break;
            case SweepParameter::Sigma:
                cfg.sigma = v;
                break;
        }
        configs.push_back(cfg);
    }
    if (base.scheme == Scheme::Stochastic && base.ensemble_size > 1) {
        SweepResult out;
        out.reference.config = base;
        out.reference.config.scheme = Scheme::Uniform;
        out.reference.config.dt = base.reference_dt;
        for (const ExperimentConfig& cfg : configs) {
            out.runs.push_back(run(cfg));
        }
        return out;
    }
    return run_shared_reference(configs);
}

// ---------------------------------------------------------------------------
// Stochastic ensembles
// ---------------------------------------------------------------------------

namespace {

ExperimentResult run_ensemble(const ExperimentConfig& config) {
    const ChainModel model =
        build_model(config.kind, config.num_sites, config.coupling, config.field);
    const Partition partition = build_partition(model, config.num_nodes);
    const int instances = config.ensemble_size;

    ExperimentResult result;
    result.config = config;

    // Zero variance makes every instance identical; evaluate one and
    // replicate its statistics.
    const bool degenerate = config.sigma == 0.0;
    const int distinct = degenerate ? 1 : instances;

    std::vector<Schedule> schedules;
    schedules.reserve(distinct);
    for (int i = 0; i < distinct; ++i) {
        const StochasticParams params = StochasticParams::with_default_t1(
            config.mu, config.sigma, config.base_seed + static_cast<std::uint64_t>(i));
        schedules.push_back(build_stochastic(model, partition, params, config.dt_ref,
                                             config.t_end));
    }

    // Common comparison times: snapshot times shared by every instance
    // that also lie on the reference grid.
    const int n_ref = steps_for(config.t_end, config.reference_dt, "reference_dt");
    const Schedule ref_schedule = build_uniform(model, n_ref, config.t_end);
    std::vector<double> common = ref_schedule.snapshot_times();
    for (const Schedule& sched : schedules) {
        const std::vector<double> own = sched.snapshot_times();
        std::vector<double> kept;
        std::size_t j = 0;
        for (double t : common) {
            while (j < own.size() && own[j] < t - kGridEps) {
                ++j;
            }
            if (j < own.size() && std::abs(own[j] - t) <= kGridEps) {
                kept.push_back(t);
            }
        }
        common = std::move(kept);
    }
    if (common.empty()) {
        throw std::runtime_error("run_ensemble: no common snapshot times with the reference");
    }

    // Reference states at the common times.
    std::vector<StateVector> ref_states;
    ref_states.reserve(common.size());
    {
        ScheduleRunner ref_runner(model, ref_schedule, initial_state(model));
        const std::vector<double>& ref_times = ref_runner.snapshot_times();
        const auto matches = match_grids(common, ref_times);
        for (const auto& [c, r] : matches) {
            ref_runner.advance_to_snapshot(r);
            ref_states.push_back(ref_runner.state());
        }
        ref_runner.finish();
    }

    std::vector<std::vector<double>> fid(distinct,
                                         std::vector<double>(common.size(), 0.0));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < distinct; ++i) {
        ScheduleRunner runner(model, schedules[i], initial_state(model));
        const auto matches = match_grids(common, runner.snapshot_times());
        for (std::size_t c = 0; c < matches.size(); ++c) {
            runner.advance_to_snapshot(matches[c].second);
            fid[i][matches[c].first] = fidelity(ref_states[matches[c].first], runner.state());
        }
        runner.finish();
    }

    result.ensemble.times = common;
    result.ensemble.mean.resize(common.size());
    result.ensemble.stddev.resize(common.size());
    for (std::size_t c = 0; c < common.size(); ++c) {
        double mean = 0.0;
        if (degenerate) {
            mean = fid[0][c];
        } else {
            for (int i = 0; i < instances; ++i) {
                mean += fid[i][c];
            }
            mean /= instances;
        }
        double var = 0.0;
        if (!degenerate && instances > 1) {
            for (int i = 0; i < instances; ++i) {
                const double d = fid[i][c] - mean;
                var += d * d;
            }
            var /= instances - 1;
        }
        result.ensemble.mean[c] = mean;
        result.ensemble.stddev[c] = std::sqrt(var);
    }
    return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void write_csv(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
    }
    out << "# config: " << result.config.to_json_text() << "\n";

    const bool has_mag = !result.magnetization.empty();
    const bool has_corr = !result.correlation.empty();
    const bool has_fid = !result.fidelity.empty();
    const bool has_ens = !result.ensemble.times.empty();
    const int num_sites = result.config.num_sites;

    out << "time";
    if (has_mag) {
        for (int i = 0; i < num_sites; ++i) {
            out << ",m_" << i;
        }
    }
    if (has_corr) {
        for (int i = 0; i < num_sites; ++i) {
            out << ",chi_0_" << i;
        }
    }
    if (has_fid) {
        out << ",fidelity";
    }
    if (has_ens) {
        out << ",fidelity_mean,fidelity_std";
    }
    out << "\n";

    const std::vector<double>& times = has_fid   ? result.fidelity.times
                                       : has_mag ? result.magnetization.times
                                       : has_corr ? result.correlation.times
                                                  : result.ensemble.times;
    for (std::size_t row = 0; row < times.size(); ++row) {
        out << format_double(times[row]);
        if (has_mag) {
            for (double v : result.magnetization.values[row]) {
                out << ',' << format_double(v);
            }
        }
        if (has_corr) {
            for (double v : result.correlation.values[row]) {
                out << ',' << format_double(v);
            }
        }
        if (has_fid) {
            out << ',' << format_double(result.fidelity.values[row][0]);
        }
        if (has_ens) {
            out << ',' << format_double(result.ensemble.mean[row]) << ','
                << format_double(result.ensemble.stddev[row]);
        }
        out << "\n";
    }
    if (!out) {
        throw std::runtime_error("write_csv: I/O failure while writing '" + path + "'");
    }
}

ExperimentResult read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_csv: cannot open '" + path + "'");
    }
    ExperimentResult result;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# config: ", 0) != 0) {
        throw std::runtime_error("read_csv: missing config header in '" + path + "'");
    }
    result.config = ExperimentConfig::from_json_text(line.substr(10));

    if (!std::getline(in, line)) {
        throw std::runtime_error("read_csv: missing column header in '" + path + "'");
    }
    std::vector<std::string> columns;
    {
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) {
            columns.push_back(col);
        }
    }
    const int num_sites = result.config.num_sites;
    const auto has_column = [&](const std::string& name) {
        return std::find(columns.begin(), columns.end(), name) != columns.end();
    };
    const bool has_mag = has_column("m_0");
    const bool has_corr = has_column("chi_0_0");
    const bool has_fid = has_column("fidelity");
    const bool has_ens = has_column("fidelity_mean");

    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            fields.push_back(std::stod(cell));
        }
        std::size_t pos = 0;
        const double time = fields.at(pos++);
        if (has_mag) {
            result.magnetization.times.push_back(time);
            result.magnetization.values.emplace_back(fields.begin() + pos,
                                                     fields.begin() + pos + num_sites);
            pos += num_sites;
        }
        if (has_corr) {
            result.correlation.times.push_back(time);
            result.correlation.values.emplace_back(fields.begin() + pos,
                                                   fields.begin() + pos + num_sites);
            pos += num_sites;
        }
        if (has_fid) {
            result.fidelity.times.push_back(time);
            result.fidelity.values.push_back({fields.at(pos++)});
        }
        if (has_ens) {
            result.ensemble.times.push_back(time);
            result.ensemble.mean.push_back(fields.at(pos++));
            result.ensemble.stddev.push_back(fields.at(pos++));
        }
    }
    return result;
}

namespace {

bool series_close(const TimeSeries& a, const TimeSeries& b, double tol) {
    if (a.times.size() != b.times.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        if (std::abs(a.times[i] - b.times[i]) > tol) {
            return false;
        }
        if (a.values[i].size() != b.values[i].size()) {
            return false;
        }
        for (std::size_t j = 0; j < a.values[i].size(); ++j) {
            if (std::abs(a.values[i][j] - b.values[i][j]) > tol) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

bool results_close(const ExperimentResult& a, const ExperimentResult& b, double tol) {
    if (!series_close(a.fidelity, b.fidelity, tol) ||
        !series_close(a.magnetization, b.magnetization, tol) ||
        !series_close(a.correlation, b.correlation, tol)) {
        return false;
    }
    if (a.ensemble.times.size() != b.ensemble.times.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.ensemble.times.size(); ++i) {
        if (std::abs(a.ensemble.times[i] - b.ensemble.times[i]) > tol ||
            std::abs(a.ensemble.mean[i] - b.ensemble.mean[i]) > tol ||
            std::abs(a.ensemble.stddev[i] - b.ensemble.stddev[i]) > tol) {
            return false;
        }
    }
    return true;
}

}  // namespace dqsim
