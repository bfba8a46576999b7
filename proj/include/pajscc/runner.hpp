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
#ifndef PAJSCC_RUNNER_HPP
#define PAJSCC_RUNNER_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pajscc/errors.hpp"
#include "pajscc/scenario_json.hpp"
#include "pajscc/sim.hpp"

namespace pajscc::runner {

/// Shortest decimal form that round-trips, identical on every run. Output
/// files are compared byte for byte, so iostream formatting is out.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_number(int v) {
    char buf[16];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += '|';
        out += ids[i];
    }
    return out;
}

inline std::string report_to_csv(const sim::SimReport& report) {
    std::string out =
        "gop_index,time_s,paths,v_kbps,k,n,predicted_pi_star,realized_loss,mse,psnr_db,outcome\n";
    for (const auto& row : report.rows) {
        out += format_number(row.gop_index);
        out += ',';
        out += format_number(row.time_s);
        out += ',';
        out += join_ids(row.paths);
        out += ',';
        out += format_number(row.v_kbps);
        out += ',';
        out += format_number(row.k);
        out += ',';
        out += format_number(row.n);
        out += ',';
        out += format_number(row.predicted_pi_star);
        out += ',';
        out += format_number(row.realized_loss);
        out += ',';
        out += format_number(row.mse);
        out += ',';
        out += format_number(row.psnr_db);
        out += ',';
        out += sim::to_string(row.outcome);
        out += '\n';
    }
    return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot write " + path.string());
    out << content;
    if (!out) throw error("write failed for " + path.string());
}

struct RunRequest {
    std::string scenario_path;
    std::vector<std::uint64_t> seeds;       // non-empty
    std::string output_dir = "out";
    std::vector<std::string> baselines = {"optimized"};
};

namespace detail {

struct SeedStats {
    std::uint64_t seed = 0;
    sim::SimSummary summary;
};

inline void mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
    mean = 0.0;
    sd = 0.0;
    if (xs.empty()) return;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

inline nlohmann::json baseline_summary(const std::vector<SeedStats>& stats,
                                       const std::vector<std::string>& path_ids) {
    nlohmann::json out;
    std::vector<double> psnrs, losses;
    out["per_seed"] = nlohmann::json::array();
    for (const auto& s : stats) {
        nlohmann::json row;
        row["seed"] = s.seed;
        row["mean_psnr_db"] = s.summary.mean_psnr_db;
        row["stddev_psnr_db"] = s.summary.stddev_psnr_db;
        row["mean_realized_loss"] = s.summary.mean_realized_loss;
        nlohmann::json util;
        for (std::size_t i = 0; i < path_ids.size(); ++i)
            util[path_ids[i]] = s.summary.path_utilization[i];
        row["path_utilization"] = util;
        out["per_seed"].push_back(row);
        psnrs.push_back(s.summary.mean_psnr_db);
        losses.push_back(s.summary.mean_realized_loss);
    }
    double mean = 0.0, sd = 0.0;
    mean_sd(psnrs, mean, sd);
    out["mean_psnr_db"] = mean;
    out["stddev_psnr_db"] = sd;
    out["ci95_psnr_db"] = 1.96 * sd / std::sqrt(static_cast<double>(psnrs.size()));
    double lmean = 0.0, lsd = 0.0;
    mean_sd(losses, lmean, lsd);
    out["mean_realized_loss"] = lmean;
    return out;
}

} // namespace detail

/// Runs every requested baseline at every seed, writing one CSV per
/// (baseline, seed) plus summary.json. Returns a process exit status and
/// reports problems on stderr rather than throwing.
inline int run(const RunRequest& request, std::ostream& err = std::cerr) {
    try {
        if (request.seeds.empty()) throw invalid_parameter("run: seeds must be non-empty");
        if (request.baselines.empty()) throw invalid_parameter("run: baselines must be non-empty");
        const auto base = config::load_scenario(request.scenario_path);
        std::filesystem::create_directories(request.output_dir);

        nlohmann::json summary;
        summary["scenario"] = request.scenario_path;
        summary["seeds"] = request.seeds;
        for (const auto& name : request.baselines) {
            const auto policy = sim::policy_from_string(name);
            std::vector<detail::SeedStats> stats;
            std::vector<std::string> path_ids;
            for (const auto seed : request.seeds) {
                auto cfg = base;
                cfg.seed = seed;
                const auto report = sim::run_scenario(cfg, policy);
                path_ids = report.path_ids;
                const auto csv_path = std::filesystem::path(request.output_dir) /
                                      (name + "_" + std::to_string(seed) + ".csv");
                write_file(csv_path, report_to_csv(report));
                stats.push_back({seed, report.summary});
            }
            summary["baselines"][name] = detail::baseline_summary(stats, path_ids);
        }
        write_file(std::filesystem::path(request.output_dir) / "summary.json",
                   summary.dump(2) + "\n");
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

/// Re-runs the scenario once per value of a single overridden key and
/// writes sweep.csv with per-baseline aggregate quality.
inline int sweep(const RunRequest& request, const std::string& param,
                 const std::vector<std::string>& values, std::ostream& err = std::cerr) {
    try {
        if (request.seeds.empty()) throw invalid_parameter("sweep: seeds must be non-empty");
        if (request.baselines.empty())
            throw invalid_parameter("sweep: baselines must be non-empty");
        if (values.empty()) throw invalid_parameter("sweep: values must be non-empty");

        std::ifstream in(request.scenario_path, std::ios::binary);
        if (!in) throw error("cannot open scenario file: " + request.scenario_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        nlohmann::json base_doc;
        try {
            base_doc = nlohmann::json::parse(buf.str());
        } catch (const nlohmann::json::parse_error& e) {
            throw error(std::string("scenario is not valid JSON: ") + e.what());
        }

        std::filesystem::create_directories(request.output_dir);
        std::string csv = "param,value,baseline,mean_psnr_db,stddev_psnr_db,ci95_psnr_db,"
                          "mean_realized_loss\n";
        for (const auto& value : values) {
            auto doc = base_doc;
            config::apply_override(doc, param, value);
            const auto cfg_base = config::scenario_from_json(doc);
            for (const auto& name : request.baselines) {
                const auto policy = sim::policy_from_string(name);
                std::vector<double> psnrs, losses;
                for (const auto seed : request.seeds) {
                    auto cfg = cfg_base;
                    cfg.seed = seed;
                    const auto report = sim::run_scenario(cfg, policy);
                    psnrs.push_back(report.summary.mean_psnr_db);
                    losses.push_back(report.summary.mean_realized_loss);
                }
                double mean = 0.0, sd = 0.0;
                detail::mean_sd(psnrs, mean, sd);
                double lmean = 0.0, lsd = 0.0;
                detail::mean_sd(losses, lmean, lsd);
                csv += param;
                csv += ',';
                csv += value;
                csv += ',';
                csv += name;
                csv += ',';
                csv += format_number(mean);
                csv += ',';
                csv += format_number(sd);
                csv += ',';
                csv += format_number(1.96 * sd / std::sqrt(static_cast<double>(psnrs.size())));
                csv += ',';
                csv += format_number(lmean);
                csv += '\n';
            }
        }
        write_file(std::filesystem::path(request.output_dir) / "sweep.csv", csv);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace pajscc::runner

#endif // PAJSCC_RUNNER_HPP
