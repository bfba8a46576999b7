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
#ifndef PAJSCC_SCENARIO_JSON_HPP
#define PAJSCC_SCENARIO_JSON_HPP

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pajscc/errors.hpp"
#include "pajscc/sim.hpp"

namespace pajscc::config {

using json = nlohmann::json;

/// Distortion parameter presets for synthetic content of increasing coding
/// complexity. Values are simulator inputs, not measurements.
inline distortion::DistortionParams distortion_preset(const std::string& name) {
    if (name == "low") return {0.5, 1500.0, 30.0, 3000.0};
    if (name == "medium") return {1.0, 3000.0, 50.0, 5000.0};
    if (name == "high") return {2.0, 6000.0, 80.0, 8000.0};
    throw invalid_parameter("unknown distortion preset: " + name);
}

namespace detail {

struct Ctx {
    std::vector<std::string> bad;

    void flag(const std::string& msg) { bad.push_back(msg); }
};

inline void expect_keys(const json& obj, const std::string& where,
                        std::initializer_list<const char*> allowed, Ctx& ctx) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) ctx.flag("unknown key \"" + item.key() + "\" in " + where);
    }
}

inline std::optional<double> num_field(const json& obj, const char* key,
                                       const std::string& where, Ctx& ctx) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        ctx.flag(where + "." + key + " must be a number");
        return std::nullopt;
    }
    return v.get<double>();
}

inline std::optional<int> int_field(const json& obj, const char* key,
                                    const std::string& where, Ctx& ctx) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
        ctx.flag(where + "." + key + " must be an integer");
        return std::nullopt;
    }
    return v.get<int>();
}

inline std::optional<std::uint64_t> u64_field(const json& obj, const char* key,
                                              const std::string& where, Ctx& ctx) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        ctx.flag(where + "." + key + " must be a non-negative integer");
        return std::nullopt;
    }
    return v.get<std::uint64_t>();
}

inline std::optional<bool> bool_field(const json& obj, const char* key,
                                      const std::string& where, Ctx& ctx) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) {
        ctx.flag(where + "." + key + " must be a boolean");
        return std::nullopt;
    }
    return v.get<bool>();
}

inline std::optional<std::string> str_field(const json& obj, const char* key,
                                            const std::string& where, Ctx& ctx) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_string()) {
        ctx.flag(where + "." + key + " must be a string");
        return std::nullopt;
    }
    return v.get<std::string>();
}

inline channel::PathSpec parse_path(const json& obj, std::size_t index, Ctx& ctx) {
    const std::string where = "paths[" + std::to_string(index) + "]";
    channel::PathSpec path;
    if (!obj.is_object()) {
        ctx.flag(where + " must be an object");
        return path;
    }
    expect_keys(obj, where,
                {"id", "bandwidth_kbps", "prop_delay_ms", "loss", "mode", "availability"}, ctx);

    if (auto id = str_field(obj, "id", where, ctx)) path.id = *id;
    else if (!obj.contains("id")) ctx.flag(where + ".id is required");
    if (auto bw = num_field(obj, "bandwidth_kbps", where, ctx)) path.bandwidth_kbps = *bw;
    else if (!obj.contains("bandwidth_kbps")) ctx.flag(where + ".bandwidth_kbps is required");
    if (auto d = num_field(obj, "prop_delay_ms", where, ctx)) path.prop_delay_ms = *d;

    double pi_b = 0.0, burst = 1.0;
    if (obj.contains("loss")) {
        const auto& loss = obj.at("loss");
        if (!loss.is_object()) {
            ctx.flag(where + ".loss must be an object");
        } else {
            expect_keys(loss, where + ".loss", {"pi_b", "mean_burst_len"}, ctx);
            if (auto p = num_field(loss, "pi_b", where + ".loss", ctx)) pi_b = *p;
            if (auto l = num_field(loss, "mean_burst_len", where + ".loss", ctx)) burst = *l;
        }
    }
    try {
        path.loss = channel::gilbert_from_stats(pi_b, burst);
    } catch (const error& e) {
        ctx.flag(where + ".loss: " + e.what());
    }

    if (auto mode = str_field(obj, "mode", where, ctx)) {
        if (*mode == "gilbert") path.mode = channel::LossMode::gilbert;
        else if (*mode == "iid") path.mode = channel::LossMode::iid;
        else ctx.flag(where + ".mode must be \"gilbert\" or \"iid\"");
    }

    if (obj.contains("availability")) {
        const auto& avail = obj.at("availability");
        if (!avail.is_array()) {
            ctx.flag(where + ".availability must be an array of [start, end] pairs");
        } else {
            for (std::size_t w = 0; w < avail.size(); ++w) {
                const auto& win = avail[w];
                const std::string wwhere = where + ".availability[" + std::to_string(w) + "]";
                if (!win.is_array() || win.size() != 2 || !win[0].is_number() ||
                    !win[1].is_number()) {
                    ctx.flag(wwhere + " must be [start_s, end_s]");
                    continue;
                }
                const double s = win[0].get<double>();
                const double e = win[1].get<double>();
                if (!(e > s) || s < 0.0) {
                    ctx.flag(wwhere + " must satisfy 0 <= start < end");
                    continue;
                }
                path.availability.push_back({s, e});
            }
        }
    }
    return path;
}

} // namespace detail

/// Builds a config from parsed JSON. Collects every problem it can find and
/// throws a single validation_error listing them all.
inline sim::ScenarioConfig scenario_from_json(const json& doc) {
    detail::Ctx ctx;
    sim::ScenarioConfig config;
    if (!doc.is_object()) throw validation_error({"top level must be an object"});

    detail::expect_keys(doc, "scenario",
                        {"paths", "gop", "distortion", "grid", "packet_bytes", "duration_s",
                         "feedback_delay_s", "feedback_ewma_alpha", "assume_truth_at_start",
                         "seed"},
                        ctx);

    if (!doc.contains("paths")) {
        ctx.flag("paths is required");
    } else if (!doc.at("paths").is_array() || doc.at("paths").empty()) {
        ctx.flag("paths must be a non-empty array");
    } else {
        const auto& arr = doc.at("paths");
        for (std::size_t i = 0; i < arr.size(); ++i)
            config.paths.push_back(detail::parse_path(arr[i], i, ctx));
    }

    if (doc.contains("gop")) {
        const auto& gop = doc.at("gop");
        if (!gop.is_object()) {
            ctx.flag("gop must be an object");
        } else {
            detail::expect_keys(gop, "gop",
                                {"frames_per_gop", "frame_rate_fps", "playout_offset_s"}, ctx);
            if (auto j = detail::int_field(gop, "frames_per_gop", "gop", ctx)) {
                if (*j < 1) ctx.flag("gop.frames_per_gop must be at least 1");
                else config.gop.frames_per_gop = *j;
            }
            if (auto f = detail::num_field(gop, "frame_rate_fps", "gop", ctx)) {
                if (!(*f > 0.0)) ctx.flag("gop.frame_rate_fps must be positive");
                else config.gop.frame_rate_fps = *f;
            }
            if (auto p = detail::num_field(gop, "playout_offset_s", "gop", ctx)) {
                if (*p < 0.0) ctx.flag("gop.playout_offset_s must be non-negative");
                else config.gop.playout_offset_s = *p;
            }
        }
    }

    config.dist = distortion_preset("medium");
    if (doc.contains("distortion")) {
        const auto& dist = doc.at("distortion");
        if (dist.is_string()) {
            try {
                config.dist = distortion_preset(dist.get<std::string>());
            } catch (const error& e) {
                ctx.flag(e.what());
            }
        } else if (dist.is_object()) {
            detail::expect_keys(dist, "distortion", {"d0", "alpha", "v0", "beta"}, ctx);
            if (auto v = detail::num_field(dist, "d0", "distortion", ctx)) config.dist.d0 = *v;
            if (auto v = detail::num_field(dist, "alpha", "distortion", ctx)) config.dist.alpha = *v;
            if (auto v = detail::num_field(dist, "v0", "distortion", ctx)) config.dist.v0 = *v;
            if (auto v = detail::num_field(dist, "beta", "distortion", ctx)) config.dist.beta = *v;
            if (config.dist.d0 < 0.0) ctx.flag("distortion.d0 must be non-negative");
            if (!(config.dist.alpha > 0.0)) ctx.flag("distortion.alpha must be positive");
            if (config.dist.v0 < 0.0) ctx.flag("distortion.v0 must be non-negative");
            if (config.dist.beta < 0.0) ctx.flag("distortion.beta must be non-negative");
        } else {
            ctx.flag("distortion must be a preset name or an object");
        }
    }

    bool explicit_grid = false;
    if (doc.contains("grid")) {
        const auto& grid = doc.at("grid");
        if (!grid.is_object()) {
            ctx.flag("grid must be an object");
        } else {
            detail::expect_keys(grid, "grid",
                                {"v_candidates_kbps", "n_max", "headroom", "max_expansion"}, ctx);
            if (grid.contains("v_candidates_kbps")) {
                const auto& vs = grid.at("v_candidates_kbps");
                if (!vs.is_array() || vs.empty()) {
                    ctx.flag("grid.v_candidates_kbps must be a non-empty array");
                } else {
                    explicit_grid = true;
                    for (const auto& v : vs) {
                        if (!v.is_number()) {
                            ctx.flag("grid.v_candidates_kbps entries must be numbers");
                            explicit_grid = false;
                            break;
                        }
                        config.grid.v_candidates_kbps.push_back(v.get<double>());
                    }
                }
            }
            if (auto v = detail::int_field(grid, "n_max", "grid", ctx)) config.grid.n_max = *v;
            if (auto v = detail::num_field(grid, "headroom", "grid", ctx)) config.grid.headroom = *v;
            if (auto v = detail::num_field(grid, "max_expansion", "grid", ctx))
                config.grid.max_expansion = *v;
        }
    }

    if (auto v = detail::int_field(doc, "packet_bytes", "scenario", ctx)) config.packet_bytes = *v;
    if (!doc.contains("duration_s")) ctx.flag("duration_s is required");
    else if (auto v = detail::num_field(doc, "duration_s", "scenario", ctx)) {
        if (!(*v > 0.0)) ctx.flag("duration_s must be positive");
        else config.duration_s = *v;
    }
    if (auto v = detail::num_field(doc, "feedback_delay_s", "scenario", ctx)) {
        if (*v < 0.0) ctx.flag("feedback_delay_s must be non-negative");
        else config.feedback_delay_s = *v;
    }
    if (auto v = detail::num_field(doc, "feedback_ewma_alpha", "scenario", ctx))
        config.feedback_ewma_alpha = *v;
    if (auto v = detail::bool_field(doc, "assume_truth_at_start", "scenario", ctx))
        config.assume_truth_at_start = *v;
    if (auto v = detail::u64_field(doc, "seed", "scenario", ctx)) config.seed = *v;

    // Default rate grid: 50 kbps steps from 100 up to the aggregate
    // configured bandwidth, keeping only rates the distortion model accepts.
    if (!explicit_grid && config.grid.v_candidates_kbps.empty() && !config.paths.empty()) {
        double bw_sum = 0.0;
        for (const auto& p : config.paths) bw_sum += p.bandwidth_kbps;
        for (double v = 100.0; v <= bw_sum + 1e-9; v += 50.0)
            if (v > config.dist.v0) config.grid.v_candidates_kbps.push_back(v);
        if (config.grid.v_candidates_kbps.empty())
            ctx.flag("default rate grid is empty; give grid.v_candidates_kbps explicitly");
    }

    if (!ctx.bad.empty()) throw validation_error(ctx.bad);

    try {
        sim::detail::validate_scenario(config);
        (void)sim::gop_count(config);
    } catch (const validation_error&) {
        throw;
    } catch (const error& e) {
        throw validation_error({e.what()});
    }
    return config;
}

/// Parses scenario JSON text. Syntax problems raise parse_error with a
/// 1-based line and column; semantic problems raise validation_error.
inline sim::ScenarioConfig parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t byte = e.byte > 0 ? static_cast<std::size_t>(e.byte) - 1 : 0;
        if (byte > text.size()) byte = text.size();
        int line = 1;
        int col = 1;
        for (std::size_t i = 0; i < byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw parse_error(e.what(), line, col);
    }
    return scenario_from_json(doc);
}

inline sim::ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

/// Canonical JSON form with every default resolved, so a config survives a
/// dump/parse cycle unchanged.
inline json scenario_to_json(const sim::ScenarioConfig& config) {
    json doc;
    doc["paths"] = json::array();
    for (const auto& p : config.paths) {
        json jp;
        jp["id"] = p.id;
        jp["bandwidth_kbps"] = p.bandwidth_kbps;
        jp["prop_delay_ms"] = p.prop_delay_ms;
        jp["loss"] = {{"pi_b", p.loss.pi_b}, {"mean_burst_len", p.loss.mean_burst_len}};
        jp["mode"] = p.mode == channel::LossMode::gilbert ? "gilbert" : "iid";
        if (!p.availability.empty()) {
            json wins = json::array();
            for (const auto& w : p.availability) wins.push_back({w.start_s, w.end_s});
            jp["availability"] = wins;
        }
        doc["paths"].push_back(jp);
    }
    doc["gop"] = {{"frames_per_gop", config.gop.frames_per_gop},
                  {"frame_rate_fps", config.gop.frame_rate_fps},
                  {"playout_offset_s", config.gop.playout_offset_s}};
    doc["distortion"] = {{"d0", config.dist.d0},
                         {"alpha", config.dist.alpha},
                         {"v0", config.dist.v0},
                         {"beta", config.dist.beta}};
    doc["grid"] = {{"v_candidates_kbps", config.grid.v_candidates_kbps},
                   {"n_max", config.grid.n_max},
                   {"headroom", config.grid.headroom},
                   {"max_expansion", config.grid.max_expansion}};
    doc["packet_bytes"] = config.packet_bytes;
    doc["duration_s"] = config.duration_s;
    doc["feedback_delay_s"] = sim::effective_feedback_delay(config);
    doc["feedback_ewma_alpha"] = config.feedback_ewma_alpha;
    doc["assume_truth_at_start"] = config.assume_truth_at_start;
    doc["seed"] = config.seed;
    return doc;
}

/// Sets `doc` at a dotted path like "paths.0.loss.pi_b". Numeric tokens
/// index arrays and must be in range; object keys are created as needed.
/// The value text is parsed as JSON when possible, else taken as a string.
inline void apply_override(json& doc, const std::string& dotted, const std::string& value_text) {
    if (dotted.empty()) throw invalid_parameter("override key is empty");
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos <= dotted.size()) {
        const std::size_t dot = dotted.find('.', pos);
        const std::size_t end = dot == std::string::npos ? dotted.size() : dot;
        tokens.push_back(dotted.substr(pos, end - pos));
        if (tokens.back().empty()) throw invalid_parameter("override key has an empty segment");
        pos = end + 1;
    }

    json value;
    try {
        value = json::parse(value_text);
    } catch (const json::parse_error&) {
        value = value_text;
    }

    json* node = &doc;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        const bool numeric = !tok.empty() && tok.find_first_not_of("0123456789") == std::string::npos;
        if (node->is_array()) {
            if (!numeric) throw invalid_parameter("override: array index expected at " + tok);
            const std::size_t idx = std::stoul(tok);
            if (idx >= node->size())
                throw invalid_parameter("override: array index out of range at " + tok);
            node = &(*node)[idx];
        } else {
            if (!node->is_object()) *node = json::object();
            node = &(*node)[tok];
        }
    }
    const auto& leaf = tokens.back();
    const bool numeric = !leaf.empty() && leaf.find_first_not_of("0123456789") == std::string::npos;
    if (node->is_array()) {
        if (!numeric) throw invalid_parameter("override: array index expected at " + leaf);
        const std::size_t idx = std::stoul(leaf);
        if (idx >= node->size())
            throw invalid_parameter("override: array index out of range at " + leaf);
        (*node)[idx] = value;
    } else {
        if (!node->is_object()) *node = json::object();
        (*node)[leaf] = value;
    }
}

} // namespace pajscc::config

#endif // PAJSCC_SCENARIO_JSON_HPP
