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

// End-to-end checks of the installed binary: every assertion here goes
// through a real process spawn, never through library calls, so the CLI
// surface (arguments, exit codes, file layout, stream routing) is what is
// under test. PAJSCC_CLI_PATH and friends are injected by the build.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "minischema.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kCsvHeader =
    "gop_index,time_s,paths,v_kbps,k,n,predicted_pi_star,realized_loss,mse,psnr_db,outcome";

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "pajscc_test_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Spawns the CLI through the shell, captures both streams via redirection.
CmdResult run_cli(const std::string& args, const fs::path& capture_dir) {
    const fs::path out_file = capture_dir / "stdout.txt";
    const fs::path err_file = capture_dir / "stderr.txt";
    const std::string cmd = std::string("\"") + PAJSCC_CLI_PATH + "\" " + args + " > \"" +
                            out_file.string() + "\" 2> \"" + err_file.string() + "\"";
    const int status = std::system(cmd.c_str());
    CmdResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::string scenario(const std::string& name) {
    return (fs::path(PAJSCC_SCENARIO_DIR) / name).string();
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

} // namespace

TEST_CASE("validate accepts every bundled scenario") {
    const auto dir = fresh_dir("validate_ok");
    const struct {
        const char* file;
        const char* expected;
    } cases[] = {
        {"minimal.json", "valid: 1 paths, 6 GoPs, 15 rate candidates"},
        {"two_path_burst.json", "valid: 2 paths, 60 GoPs, 6 rate candidates"},
        {"aggregate_bandwidth.json", "valid: 2 paths, 60 GoPs, 4 rate candidates"},
        {"single_path_iid.json", "valid: 1 paths, 240 GoPs, 2 rate candidates"},
        {"handover.json", "valid: 2 paths, 60 GoPs, 6 rate candidates"},
    };
    for (const auto& c : cases) {
        INFO(c.file);
        const auto r = run_cli("validate \"" + scenario(c.file) + "\"", dir);
        CHECK(r.exit_code == 0);
        CHECK(first_line(r.out) == c.expected);
        CHECK(r.err.empty());
    }
}

TEST_CASE("validate names an unknown key and exits nonzero") {
    const auto dir = fresh_dir("validate_bad");
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << R"({"paths": [{"id": "p", "bandwidh": 800}], "duration_s": 1.6})";

    const auto r = run_cli("validate \"" + bad.string() + "\"", dir);
    CHECK(r.exit_code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("invalid scenario") != std::string::npos);
    CHECK(r.err.find("bandwidh") != std::string::npos);
}

TEST_CASE("validate reports syntax errors and missing files") {
    const auto dir = fresh_dir("validate_syntax");
    const fs::path broken = dir / "broken.json";
    std::ofstream(broken) << "{\n  \"paths\": [}\n";

    auto r = run_cli("validate \"" + broken.string() + "\"", dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(r.err.find("parse error") != std::string::npos);

    r = run_cli("validate \"" + (dir / "nope.json").string() + "\"", dir);
    CHECK(r.exit_code == 1);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("run writes per-seed CSVs and a schema-conforming summary") {
    const auto dir = fresh_dir("run_shape");
    const auto out = dir / "out";
    const auto r = run_cli("run \"" + scenario("two_path_burst.json") +
                               "\" --seeds 1,2 --baselines optimized,equal_split --out \"" +
                               out.string() + "\"",
                           dir);
    REQUIRE(r.exit_code == 0);

    for (const char* name :
         {"optimized_1.csv", "optimized_2.csv", "equal_split_1.csv", "equal_split_2.csv"}) {
        INFO(name);
        REQUIRE(fs::exists(out / name));
        const auto text = slurp(out / name);
        CHECK(first_line(text) == kCsvHeader);
        CHECK(line_count(text) == 61); // header + one row per GoP
        CHECK(text.back() == '\n');
    }

    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    const auto schema = nlohmann::json::parse(slurp(PAJSCC_SCHEMA_PATH));
    const auto problems = minischema::validate(schema, summary);
    for (const auto& p : problems) {
        INFO(p);
        CHECK(false);
    }
    CHECK(problems.empty());

    CHECK(summary["scenario"] == scenario("two_path_burst.json"));
    CHECK(summary["seeds"] == nlohmann::json::array({1, 2}));
    REQUIRE(summary["baselines"].contains("optimized"));
    REQUIRE(summary["baselines"].contains("equal_split"));
    CHECK(summary["baselines"].size() == 2);
    for (const auto& [name, entry] : summary["baselines"].items()) {
        INFO(name);
        CHECK(entry["per_seed"].size() == 2);
        for (const auto& ps : entry["per_seed"]) {
            CHECK(ps["path_utilization"].contains("stable"));
            CHECK(ps["path_utilization"].contains("burst"));
        }
    }

    // Splitting half the packets onto the 600 kbps path at a mid-grid rate
    // drowns it; the optimizer must not share that fate.
    const double opt = summary["baselines"]["optimized"]["mean_psnr_db"].get<double>();
    const double eq = summary["baselines"]["equal_split"]["mean_psnr_db"].get<double>();
    CHECK(opt >= eq);
}

TEST_CASE("identical invocations produce byte-identical outputs") {
    const auto dir = fresh_dir("run_repeat");
    const std::string base = "run \"" + scenario("two_path_burst.json") +
                             "\" --seeds 3 --baselines optimized,no_fec,best_single_path";
    const auto out_a = dir / "a";
    const auto out_b = dir / "b";
    REQUIRE(run_cli(base + " --out \"" + out_a.string() + "\"", dir).exit_code == 0);
    REQUIRE(run_cli(base + " --out \"" + out_b.string() + "\"", dir).exit_code == 0);

    const char* files[] = {"optimized_3.csv", "no_fec_3.csv", "best_single_path_3.csv",
                           "summary.json"};
    for (const char* name : files) {
        INFO(name);
        CHECK(slurp(out_a / name) == slurp(out_b / name));
    }
}

TEST_CASE("run defaults the seed list to the scenario's seed") {
    const auto dir = fresh_dir("run_default_seed");
    const auto out = dir / "out";
    const auto r =
        run_cli("run \"" + scenario("minimal.json") + "\" --out \"" + out.string() + "\"", dir);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(out / "optimized_1.csv")); // minimal.json leaves seed = 1
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary["seeds"] == nlohmann::json::array({1}));
    CHECK(summary["baselines"].size() == 1);
    CHECK(summary["baselines"].contains("optimized"));
}

TEST_CASE("sweep emits one row per value and baseline") {
    const auto dir = fresh_dir("sweep");
    const auto out = dir / "out";
    const auto r = run_cli("sweep \"" + scenario("minimal.json") +
                               "\" --param paths.0.loss.pi_b --values 0,0.05 "
                               "--baselines optimized,no_fec --seeds 1 --out \"" +
                               out.string() + "\"",
                           dir);
    REQUIRE(r.exit_code == 0);

    const auto text = slurp(out / "sweep.csv");
    CHECK(first_line(text) ==
          "param,value,baseline,mean_psnr_db,stddev_psnr_db,ci95_psnr_db,mean_realized_loss");
    REQUIRE(line_count(text) == 5); // header + 2 values x 2 baselines

    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line); // header
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].rfind("paths.0.loss.pi_b,0,optimized,", 0) == 0);
    CHECK(rows[1].rfind("paths.0.loss.pi_b,0,no_fec,", 0) == 0);
    CHECK(rows[2].rfind("paths.0.loss.pi_b,0.05,optimized,", 0) == 0);
    CHECK(rows[3].rfind("paths.0.loss.pi_b,0.05,no_fec,", 0) == 0);

    // Without FEC, the lossless sweep point must beat the lossy one.
    auto psnr_of = [](const std::string& row) {
        std::istringstream ss(row);
        std::string field;
        for (int i = 0; i < 4; ++i) std::getline(ss, field, ',');
        return std::stod(field);
    };
    CHECK(psnr_of(rows[1]) > psnr_of(rows[3]));
}

TEST_CASE("malformed command lines exit nonzero") {
    const auto dir = fresh_dir("usage");
    CHECK(run_cli("run", dir).exit_code != 0);                // missing scenario
    CHECK(run_cli("frobnicate x.json", dir).exit_code != 0);  // unknown subcommand
    CHECK(run_cli("sweep \"" + scenario("minimal.json") + "\" --values 1,2", dir).exit_code !=
          0); // missing --param
    CHECK(run_cli("", dir).exit_code != 0); // a subcommand is required
}

TEST_CASE("run surfaces scenario validation failures") {
    const auto dir = fresh_dir("run_invalid");
    const fs::path bad = dir / "bad.json";
    // 1.0 s is not a whole number of default GoPs.
    std::ofstream(bad) << R"({"paths": [{"id": "p", "bandwidth_kbps": 800}], "duration_s": 1.0})";
    const auto r = run_cli("run \"" + bad.string() + "\" --out \"" + (dir / "out").string() + "\"",
                           dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("invalid scenario") != std::string::npos);
}
