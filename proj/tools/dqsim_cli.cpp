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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dqsim/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string output_or(const std::string& override_path, const std::string& config_path,
                      const std::string& fallback) {
    if (!override_path.empty()) {
        return override_path;
    }
    if (!config_path.empty()) {
        return config_path;
    }
    return fallback;
}

// "out.csv" -> "out_<tag>.csv"
std::string tagged_path(const std::string& path, const std::string& tag) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) {
        return path + "_" + tag;
    }
    return path.substr(0, dot) + "_" + tag + path.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dqsim: Trotterized time evolution of spin chains on simulated "
                 "distributed quantum compute nodes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "JSON experiment config")->required();
        cmd->add_option("--out", out_path, "output CSV path (overrides config)");
        cmd->add_option("--seed", seed, "base seed override")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--threads", threads, "worker thread count (0 = hardware default)");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment against its reference");
    add_common(run_cmd);

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run a grid over n, dt or sigma with a shared reference");
    add_common(sweep_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
#ifdef _OPENMP
        if (threads > 0) {
            omp_set_num_threads(threads);
        }
#endif
        const std::string text = read_file(config_path);
        dqsim::ExperimentConfig config = dqsim::ExperimentConfig::from_json_text(text);
        if (seed_set) {
            config.base_seed = seed;
        }

        if (run_cmd->parsed()) {
            const dqsim::ExperimentResult result = dqsim::run(config);
            const std::string path = output_or(out_path, config.output_path, "result.csv");
            dqsim::write_csv(result, path);
            std::cout << "wrote " << path << "\n";
            return 0;
        }

        // sweep: the grid lives in the config under "sweep".
        const auto j = nlohmann::json::parse(text);
        if (!j.contains("sweep")) {
            std::cerr << "error: sweep config needs a \"sweep\" object "
                         "{\"parameter\": ..., \"values\": [...]}\n";
            return 1;
        }
        const std::string param_name = j["sweep"].at("parameter").get<std::string>();
        const std::vector<double> values = j["sweep"].at("values").get<std::vector<double>>();
        dqsim::SweepParameter param;
        if (param_name == "n") {
            param = dqsim::SweepParameter::Sparsity;
        } else if (param_name == "dt") {
            param = dqsim::SweepParameter::Dt;
        } else if (param_name == "sigma") {
            param = dqsim::SweepParameter::Sigma;
        } else {
            std::cerr << "error: sweep.parameter must be \"n\", \"dt\" or \"sigma\"\n";
            return 1;
        }

        const dqsim::SweepResult result = dqsim::sweep(config, param, values);
        const std::string base = output_or(out_path, config.output_path, "sweep.csv");
        if (result.reference.config.want_magnetization ||
            result.reference.config.want_correlation) {
            dqsim::write_csv(result.reference, tagged_path(base, "reference"));
            std::cout << "wrote " << tagged_path(base, "reference") << "\n";
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            std::ostringstream tag;
            tag << param_name << values[i];
            dqsim::write_csv(result.runs[i], tagged_path(base, tag.str()));
            std::cout << "wrote " << tagged_path(base, tag.str()) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
