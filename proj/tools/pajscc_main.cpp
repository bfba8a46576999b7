/* Copyright (C) 2026 pajscc contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pajscc/pajscc.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pajscc: multipath FEC rate allocation simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::vector<std::uint64_t> seeds;
    std::string out_dir = "out";
    std::vector<std::string> baselines = {"optimized"};

    auto* run_cmd = app.add_subcommand("run", "simulate a scenario and write CSV/JSON reports");
    run_cmd->add_option("scenario", scenario, "scenario JSON file")->required();
    run_cmd->add_option("--seeds", seeds, "seeds to run (default: the scenario's seed)")
        ->delimiter(',');
    run_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    run_cmd->add_option("--baselines", baselines, "policies to run")
        ->delimiter(',')
        ->capture_default_str();

    auto* validate_cmd = app.add_subcommand("validate", "check a scenario file and exit");
    validate_cmd->add_option("scenario", scenario, "scenario JSON file")->required();

    std::string sweep_param;
    std::vector<std::string> sweep_values;
    auto* sweep_cmd = app.add_subcommand("sweep", "rerun a scenario across one varied key");
    sweep_cmd->add_option("scenario", scenario, "scenario JSON file")->required();
    sweep_cmd->add_option("--param", sweep_param, "dotted config key, e.g. paths.0.loss.pi_b")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "values to substitute")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--seeds", seeds, "seeds to run (default: the scenario's seed)")
        ->delimiter(',');
    sweep_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    sweep_cmd->add_option("--baselines", baselines, "policies to run")
        ->delimiter(',')
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) {
            const auto config = pajscc::config::load_scenario(scenario);
            std::cout << "valid: " << config.paths.size() << " paths, "
                      << pajscc::sim::gop_count(config) << " GoPs, "
                      << config.grid.v_candidates_kbps.size() << " rate candidates\n";
            return 0;
        }

        if (seeds.empty()) seeds.push_back(pajscc::config::load_scenario(scenario).seed);
        pajscc::runner::RunRequest request{scenario, seeds, out_dir, baselines};
        if (run_cmd->parsed()) return pajscc::runner::run(request);
        return pajscc::runner::sweep(request, sweep_param, sweep_values);
    } catch (const pajscc::validation_error& e) {
        std::cerr << "invalid scenario:\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
