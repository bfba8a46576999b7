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
#ifndef PAJSCC_SIM_HPP
#define PAJSCC_SIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pajscc/allocator.hpp"
#include "pajscc/channel.hpp"
#include "pajscc/distortion.hpp"
#include "pajscc/errors.hpp"
#include "pajscc/estimator.hpp"
#include "pajscc/fec.hpp"
#include "pajscc/gop.hpp"
#include "pajscc/rng.hpp"

namespace pajscc::sim {

struct ScenarioConfig {
    std::vector<channel::PathSpec> paths;
    GopSpec gop;
    distortion::DistortionParams dist;
    allocator::SearchGrid grid;
    int packet_bytes = 1000;
    double duration_s = 8.0;
    double feedback_delay_s = -1.0; // negative means one GoP duration
    double feedback_ewma_alpha = 0.3;
    bool assume_truth_at_start = true;
    std::uint64_t seed = 1;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline double effective_feedback_delay(const ScenarioConfig& config) {
    return config.feedback_delay_s < 0.0 ? config.gop.gop_duration_s() : config.feedback_delay_s;
}

/// Number of whole GoPs in the scenario. The duration must line up with the
/// GoP length; J/F is rarely a round decimal, so a small absolute slack is
/// allowed before rejecting.
inline int gop_count(const ScenarioConfig& config) {
    const double dur = config.gop.gop_duration_s();
    const double ratio = config.duration_s / dur;
    const int count = static_cast<int>(std::llround(ratio));
    if (count < 1 || std::abs(static_cast<double>(count) * dur - config.duration_s) > 1e-6)
        throw invalid_parameter("duration_s is not a whole number of GoPs");
    return count;
}

enum class AllocPolicy { optimized, equal_split, best_single_path, no_fec };

inline const char* to_string(AllocPolicy policy) {
    switch (policy) {
        case AllocPolicy::optimized: return "optimized";
        case AllocPolicy::equal_split: return "equal_split";
        case AllocPolicy::best_single_path: return "best_single_path";
        case AllocPolicy::no_fec: return "no_fec";
    }
    throw invalid_parameter("unknown policy");
}

inline AllocPolicy policy_from_string(const std::string& name) {
    if (name == "optimized") return AllocPolicy::optimized;
    if (name == "equal_split") return AllocPolicy::equal_split;
    if (name == "best_single_path") return AllocPolicy::best_single_path;
    if (name == "no_fec") return AllocPolicy::no_fec;
    throw invalid_parameter("unknown policy name: " + name);
}

enum class DecodeOutcome { ok, partial, lost, unavailable };

inline const char* to_string(DecodeOutcome outcome) {
    switch (outcome) {
        case DecodeOutcome::ok: return "ok";
        case DecodeOutcome::partial: return "partial";
        case DecodeOutcome::lost: return "lost";
        case DecodeOutcome::unavailable: return "unavailable";
    }
    throw invalid_parameter("unknown outcome");
}

struct ScheduledSend {
    int packet_index = 0;
    std::string path_id;
    double send_time_s = 0.0;
};

/// Maps the block's packets onto the decision's paths: counts by largest
/// remainder over the decision weights, slices contiguous in selected-id
/// order, everything handed to the channel at the GoP start. The per-path
/// queue does the serialization.
inline std::vector<ScheduledSend> distribute(const fec::EncodedBlock& block,
                                             const allocator::AllocationDecision& decision,
                                             double gop_start_s,
                                             const std::vector<channel::PathSpec>& paths) {
    if (decision.selected.empty()) throw no_paths("distribute: decision selects no paths");
    if (decision.selected.size() != decision.weights.size())
        throw invalid_parameter("distribute: selected/weights size mismatch");
    const int n = static_cast<int>(block.packets.size());
    if (n != decision.fec_n)
        throw invalid_parameter("distribute: block length disagrees with decision");

    for (const auto& id : decision.selected) {
        const auto it = std::find_if(paths.begin(), paths.end(),
                                     [&](const channel::PathSpec& p) { return p.id == id; });
        if (it == paths.end())
            throw invalid_parameter("distribute: unknown path id " + id);
        if (!channel::is_available(*it, gop_start_s))
            throw path_unavailable("distribute: path " + id + " not available");
    }

    const auto counts = estimator::largest_remainder_split(n, decision.weights).counts;
    std::vector<ScheduledSend> schedule;
    schedule.reserve(static_cast<std::size_t>(n));
    int index = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (int j = 0; j < counts[i]; ++j) {
            schedule.push_back({index, decision.selected[i], gop_start_s});
            ++index;
        }
    }
    return schedule;
}

struct ArrivedPacket {
    int packet_index = 0;
    double arrival_time_s = 0.0;
};

struct ClientResult {
    DecodeOutcome outcome = DecodeOutcome::lost;
    double realized_source_loss = 1.0; // unrecovered source-packet fraction
    std::vector<fec::Payload> sources; // decoded set, or survivors on failure
    int on_time_packets = 0;
};

/// Client-side cut: packets after the playout deadline are worthless, the
/// rest feed the erasure decoder. On decode failure the systematic
/// survivors still count toward the delivered fraction.
inline ClientResult client_receive(const fec::EncodedBlock& block,
                                   const std::vector<ArrivedPacket>& arrivals,
                                   const GopSpec& gop, double gop_start_s) {
    const double deadline = gop_start_s + gop.playout_offset_s + gop.gop_duration_s();
    const int n = static_cast<int>(block.packets.size());

    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<fec::FecPacket> received;
    received.reserve(arrivals.size());
    for (const auto& a : arrivals) {
        if (a.packet_index < 0 || a.packet_index >= n)
            throw corrupt_index("client_receive: packet index out of range");
        if (a.arrival_time_s > deadline) continue;
        if (seen[static_cast<std::size_t>(a.packet_index)]) continue;
        seen[static_cast<std::size_t>(a.packet_index)] = 1;
        received.push_back(block.packets[static_cast<std::size_t>(a.packet_index)]);
    }

    ClientResult out;
    out.on_time_packets = static_cast<int>(received.size());
    const auto decoded = fec::decode(received, block.spec);
    out.sources = decoded.sources;
    if (decoded.ok) {
        out.outcome = DecodeOutcome::ok;
        out.realized_source_loss = 0.0;
        return out;
    }
    const int k = block.spec.k;
    const int got = static_cast<int>(decoded.recovered_sources.size());
    out.realized_source_loss = static_cast<double>(k - got) / static_cast<double>(k);
    out.outcome = got > 0 ? DecodeOutcome::partial : DecodeOutcome::lost;
    return out;
}

/// One GoP's worth of receiver-side measurements for a single path.
struct PathObservation {
    int sent = 0;
    int lost = 0;                 // dropped by the channel, late arrivals excluded
    double mean_burst_len = 0.0;  // mean run of consecutive losses, 0 if lossless
    bool has_delay = false;
    double delay_ms = 0.0;
    double bandwidth_kbps = 0.0;
};

/// Exponentially smoothed estimate refresh. Burst length and delay are only
/// folded in when the GoP actually produced an observation of them.
inline allocator::PathEstimate feedback_update(const allocator::PathEstimate& prev,
                                               const PathObservation& obs, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw invalid_parameter("feedback_update: alpha outside (0, 1]");
    if (obs.sent < 1 || obs.lost < 0 || obs.lost > obs.sent)
        throw invalid_parameter("feedback_update: inconsistent send/loss counts");
    if (!(obs.bandwidth_kbps > 0.0))
        throw invalid_parameter("feedback_update: bandwidth observation must be positive");

    allocator::PathEstimate next = prev;
    const double loss_frac = static_cast<double>(obs.lost) / static_cast<double>(obs.sent);
    next.est_loss = (1.0 - alpha) * prev.est_loss + alpha * loss_frac;
    next.est_bandwidth_kbps = (1.0 - alpha) * prev.est_bandwidth_kbps + alpha * obs.bandwidth_kbps;
    if (obs.has_delay)
        next.est_delay_ms = (1.0 - alpha) * prev.est_delay_ms + alpha * obs.delay_ms;
    if (obs.lost > 0 && obs.mean_burst_len >= 1.0)
        next.est_burst_len = (1.0 - alpha) * prev.est_burst_len + alpha * obs.mean_burst_len;
    next.staleness_s = 0.0;
    return next;
}

struct GopRow {
    int gop_index = 0;
    double time_s = 0.0;
    std::vector<std::string> paths; // selected ids, ascending
    double v_kbps = 0.0;
    int k = 0;
    int n = 0;
    double predicted_pi_star = 0.0;
    double realized_loss = 0.0;
    double mse = 0.0;
    double psnr_db = 0.0;
    DecodeOutcome outcome = DecodeOutcome::lost;
    bool degraded = false;
    std::vector<int> packets_per_path; // aligned with SimReport::path_ids, not in CSV
};

struct SimSummary {
    int gops = 0;
    double mean_psnr_db = 0.0;
    double stddev_psnr_db = 0.0; // sample stddev, 0 for a single GoP
    double mean_realized_loss = 0.0;
    double mean_predicted_pi_star = 0.0;
    std::vector<double> path_utilization; // serialization busy time / duration
};

struct SimReport {
    std::vector<std::string> path_ids; // config order, aligns path_utilization
    std::vector<GopRow> rows;
    SimSummary summary;
};

namespace detail {

// Sub-stream tags under the master seed.
inline constexpr std::uint64_t kSeedPath = 1;
inline constexpr std::uint64_t kSeedPayload = 2;

inline std::vector<fec::Payload> make_payloads(int k, int packet_bytes, std::uint64_t seed,
                                               int gop_index) {
    RngStream rng(derive_seed(seed, kSeedPayload, static_cast<std::uint64_t>(gop_index)));
    std::vector<fec::Payload> out(static_cast<std::size_t>(k));
    for (auto& payload : out) {
        payload.resize(static_cast<std::size_t>(packet_bytes));
        std::size_t i = 0;
        while (i < payload.size()) {
            std::uint64_t word = rng.next_u64();
            for (int b = 0; b < 8 && i < payload.size(); ++b, ++i) {
                payload[i] = static_cast<std::uint8_t>(word & 0xFF);
                word >>= 8;
            }
        }
    }
    return out;
}

struct PerPathTally {
    int sent = 0;
    int lost = 0;
    int runs = 0;
    bool in_run = false;
    bool any_arrival = false;
    double first_arrival_s = 0.0;

    void on_fate(channel::Fate fate, double arrival_s) {
        ++sent;
        if (fate == channel::Fate::Lost) {
            ++lost;
            if (!in_run) {
                ++runs;
                in_run = true;
            }
        } else {
            in_run = false;
            if (!any_arrival || arrival_s < first_arrival_s) first_arrival_s = arrival_s;
            any_arrival = true;
        }
    }
};

inline void validate_scenario(const ScenarioConfig& config) {
    std::vector<std::string> bad;
    if (config.paths.empty()) bad.push_back("paths must be non-empty");
    if (config.paths.size() > 8) bad.push_back("at most 8 paths are supported");
    for (std::size_t i = 0; i < config.paths.size(); ++i) {
        const auto& p = config.paths[i];
        if (p.id.empty()) bad.push_back("path " + std::to_string(i) + ": empty id");
        if (!(p.bandwidth_kbps > 0.0)) bad.push_back("path " + p.id + ": bandwidth must be positive");
        if (p.prop_delay_ms < 0.0) bad.push_back("path " + p.id + ": negative delay");
        for (std::size_t j = i + 1; j < config.paths.size(); ++j)
            if (config.paths[j].id == p.id) bad.push_back("duplicate path id " + p.id);
    }
    if (config.packet_bytes < 1) bad.push_back("packet_bytes must be at least 1");
    if (!(config.feedback_ewma_alpha > 0.0) || config.feedback_ewma_alpha > 1.0)
        bad.push_back("feedback_ewma_alpha outside (0, 1]");
    if (config.grid.v_candidates_kbps.empty()) bad.push_back("rate grid is empty");
    if (!std::is_sorted(config.grid.v_candidates_kbps.begin(),
                        config.grid.v_candidates_kbps.end()))
        bad.push_back("rate grid must be ascending");
    for (double v : config.grid.v_candidates_kbps)
        if (!(v > config.dist.v0)) bad.push_back("rate grid entry at or below v0");
    if (config.grid.n_max < 1 || config.grid.n_max > 255)
        bad.push_back("n_max outside [1, 255]");
    if (!(config.grid.headroom > 0.0) || config.grid.headroom > 1.0)
        bad.push_back("headroom outside (0, 1]");
    if (!(config.grid.max_expansion >= 1.0)) bad.push_back("max_expansion below 1");
    if (!(config.dist.alpha > 0.0)) bad.push_back("distortion alpha must be positive");
    if (!bad.empty()) throw validation_error(bad);
}

} // namespace detail

/// Runs the full sender/channel/client loop for every GoP in the scenario.
/// All randomness comes from sub-streams of config.seed, so two calls with
/// the same config produce identical reports.
inline SimReport run_scenario(const ScenarioConfig& config,
                              AllocPolicy policy = AllocPolicy::optimized) {
    detail::validate_scenario(config);
    const int gops = gop_count(config);
    const double gop_dur = config.gop.gop_duration_s();
    const double fb_delay = effective_feedback_delay(config);

    std::vector<channel::PathState> states;
    states.reserve(config.paths.size());
    std::vector<allocator::PathEstimate> estimates;
    std::vector<double> last_update(config.paths.size(), 0.0);
    std::vector<double> busy_s(config.paths.size(), 0.0);
    for (std::size_t i = 0; i < config.paths.size(); ++i) {
        const auto& p = config.paths[i];
        states.emplace_back(p, derive_seed(config.seed, detail::kSeedPath,
                                           static_cast<std::uint64_t>(i)));
        allocator::PathEstimate est;
        est.path_id = p.id;
        est.est_bandwidth_kbps = p.bandwidth_kbps;
        est.est_delay_ms = p.prop_delay_ms;
        est.est_loss = config.assume_truth_at_start ? p.loss.pi_b : 0.0;
        est.est_burst_len = config.assume_truth_at_start ? p.loss.mean_burst_len : 1.0;
        estimates.push_back(est);
    }

    struct PendingFeedback {
        double visible_s;
        std::size_t path;
        PathObservation obs;
    };
    std::vector<PendingFeedback> pending;
    std::size_t applied = 0;

    SimReport report;
    for (const auto& p : config.paths) report.path_ids.push_back(p.id);
    report.rows.reserve(static_cast<std::size_t>(gops));

    for (int g = 0; g < gops; ++g) {
        const double t0 = static_cast<double>(g) * gop_dur;
        const double deadline_rel = config.gop.playout_offset_s + gop_dur;

        // Queue is chronological because GoPs append in time order.
        while (applied < pending.size() && pending[applied].visible_s <= t0) {
            const auto& fb = pending[applied];
            estimates[fb.path] = feedback_update(estimates[fb.path], fb.obs,
                                                 config.feedback_ewma_alpha);
            last_update[fb.path] = fb.visible_s;
            ++applied;
        }

        std::vector<allocator::PathEstimate> candidates;
        std::vector<std::size_t> candidate_pos;
        for (std::size_t i = 0; i < config.paths.size(); ++i) {
            if (!channel::is_available(config.paths[i], t0)) continue;
            auto est = estimates[i];
            est.staleness_s = t0 - last_update[i];
            candidates.push_back(est);
            candidate_pos.push_back(i);
        }

        GopRow row;
        row.gop_index = g;
        row.time_s = t0;

        if (candidates.empty()) {
            // Nothing to send on; keep the row so the timeline stays dense.
            const double v = config.grid.v_candidates_kbps.front();
            row.v_kbps = v;
            row.k = packetize(v, config.gop, config.packet_bytes);
            row.n = row.k;
            row.predicted_pi_star = 1.0;
            row.realized_loss = 1.0;
            row.mse = distortion::d_total(config.dist, v, 1.0);
            row.psnr_db = distortion::mse_to_psnr(row.mse);
            row.outcome = DecodeOutcome::unavailable;
            row.degraded = true;
            row.packets_per_path.assign(config.paths.size(), 0);
            report.rows.push_back(std::move(row));
            continue;
        }

        allocator::AllocationDecision decision;
        switch (policy) {
            case AllocPolicy::optimized:
                decision = allocator::allocate(candidates, config.grid, config.gop,
                                               config.packet_bytes, config.dist, deadline_rel);
                break;
            case AllocPolicy::no_fec: {
                auto grid = config.grid;
                grid.max_expansion = 1.0;
                decision = allocator::allocate(candidates, grid, config.gop,
                                               config.packet_bytes, config.dist, deadline_rel);
                break;
            }
            case AllocPolicy::best_single_path: {
                const allocator::PathEstimate* pick = &candidates.front();
                for (const auto& est : candidates) {
                    if (est.est_bandwidth_kbps > pick->est_bandwidth_kbps ||
                        (est.est_bandwidth_kbps == pick->est_bandwidth_kbps &&
                         est.path_id < pick->path_id))
                        pick = &est;
                }
                decision = allocator::allocate({*pick}, config.grid, config.gop,
                                               config.packet_bytes, config.dist, deadline_rel);
                break;
            }
            case AllocPolicy::equal_split: {
                // Fixed mid-grid rate, 1.5x expansion, every available path
                // weighted alike. Deliberately ignores the constraints.
                std::sort(candidates.begin(), candidates.end(),
                          [](const auto& a, const auto& b) { return a.path_id < b.path_id; });
                const auto& vs = config.grid.v_candidates_kbps;
                std::size_t vi = vs.size() / 2;
                int k = packetize(vs[vi], config.gop, config.packet_bytes);
                while (k > 255 && vi > 0) k = packetize(vs[--vi], config.gop, config.packet_bytes);
                if (k > 255) throw infeasible("equal_split: no grid rate fits 255 packets");
                const double v = vs[vi];
                const int n = std::max(k, std::min(config.grid.n_max, (3 * k + 1) / 2));
                std::vector<std::string> ids;
                std::vector<double> weights(candidates.size(), 1.0);
                for (const auto& est : candidates) ids.push_back(est.path_id);
                const auto pred = allocator::predict(candidates, weights, v, n, k, config.gop,
                                                     config.packet_bytes, config.dist,
                                                     deadline_rel);
                decision = allocator::AllocationDecision{ids, weights, v, k, n,
                                                         pred.pi_star, pred.mse, false};
                break;
            }
        }

        const auto payloads = detail::make_payloads(decision.fec_k, config.packet_bytes,
                                                    config.seed, g);
        const fec::FecBlockSpec block_spec{decision.fec_k, decision.fec_n, config.packet_bytes};
        const auto block = fec::encode(payloads, block_spec);
        const auto schedule = distribute(block, decision, t0, config.paths);

        std::vector<detail::PerPathTally> tally(config.paths.size());
        std::vector<ArrivedPacket> arrivals;
        arrivals.reserve(schedule.size());
        for (const auto& send : schedule) {
            std::size_t pi = 0;
            while (config.paths[pi].id != send.path_id) ++pi;
            const auto res = channel::transit(states[pi], send.send_time_s, config.packet_bytes);
            busy_s[pi] += channel::serialization_s(config.paths[pi], config.packet_bytes);
            tally[pi].on_fate(res.fate, res.arrival_time_s);
            if (res.fate == channel::Fate::Delivered)
                arrivals.push_back({send.packet_index, res.arrival_time_s});
        }

        const auto client = client_receive(block, arrivals, config.gop, t0);
        if (client.outcome == DecodeOutcome::ok) {
            // Decoder output must reproduce the encoder input bit for bit.
            if (client.sources.size() != payloads.size())
                throw error("internal: decoded source count mismatch");
            for (std::size_t i = 0; i < payloads.size(); ++i)
                if (client.sources[i] != payloads[i])
                    throw error("internal: decoded payload mismatch");
        }

        row.paths = decision.selected;
        row.v_kbps = decision.source_rate_kbps;
        row.k = decision.fec_k;
        row.n = decision.fec_n;
        row.predicted_pi_star = decision.predicted_pi_star;
        row.realized_loss = client.realized_source_loss;
        row.mse = distortion::d_total(config.dist, decision.source_rate_kbps,
                                      client.realized_source_loss);
        row.psnr_db = distortion::mse_to_psnr(row.mse);
        row.outcome = client.outcome;
        row.degraded = decision.degraded;
        for (const auto& t : tally) row.packets_per_path.push_back(t.sent);
        report.rows.push_back(std::move(row));

        for (std::size_t i = 0; i < config.paths.size(); ++i) {
            const auto& t = tally[i];
            if (t.sent == 0) continue;
            PathObservation obs;
            obs.sent = t.sent;
            obs.lost = t.lost;
            obs.mean_burst_len = t.runs > 0
                ? static_cast<double>(t.lost) / static_cast<double>(t.runs)
                : 0.0;
            obs.bandwidth_kbps = config.paths[i].bandwidth_kbps;
            if (t.any_arrival) {
                obs.has_delay = true;
                const double ser = channel::serialization_s(config.paths[i], config.packet_bytes);
                obs.delay_ms = std::max(0.0, (t.first_arrival_s - t0 - ser) * 1000.0);
            }
            pending.push_back({t0 + gop_dur + fb_delay, i, obs});
        }
        (void)candidate_pos;
    }

    auto& sum = report.summary;
    sum.gops = gops;
    for (const auto& row : report.rows) {
        sum.mean_psnr_db += row.psnr_db;
        sum.mean_realized_loss += row.realized_loss;
        sum.mean_predicted_pi_star += row.predicted_pi_star;
    }
    const double n_rows = static_cast<double>(report.rows.size());
    sum.mean_psnr_db /= n_rows;
    sum.mean_realized_loss /= n_rows;
    sum.mean_predicted_pi_star /= n_rows;
    if (report.rows.size() > 1) {
        double acc = 0.0;
        for (const auto& row : report.rows) {
            const double d = row.psnr_db - sum.mean_psnr_db;
            acc += d * d;
        }
        sum.stddev_psnr_db = std::sqrt(acc / (n_rows - 1.0));
    }
    for (std::size_t i = 0; i < config.paths.size(); ++i)
        sum.path_utilization.push_back(busy_s[i] / config.duration_s);
    return report;
}

} // namespace pajscc::sim

#endif // PAJSCC_SIM_HPP
