/*
* Copyright (C) 2026 pajscc contributors
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
#ifndef PAJSCC_CHANNEL_HPP
#define PAJSCC_CHANNEL_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pajscc/errors.hpp"
#include "pajscc/rng.hpp"

namespace pajscc::channel {

/// Two-state burst-loss parameters, per packet. pi_b and mean_burst_len are
/// the calibration pair; p_gb/p_bg are the implied per-packet transition
/// probabilities Good->Bad and Bad->Good.
struct GilbertParams {
    double pi_b = 0.0;
    double mean_burst_len = 1.0;
    double p_gb = 0.0;
    double p_bg = 1.0;

    bool operator==(const GilbertParams&) const = default;
};

/// Derive transition probabilities from the two observable statistics:
/// average loss rate and mean consecutive-loss run length.
inline GilbertParams gilbert_from_stats(double pi_b, double mean_burst_len) {
    if (!(pi_b >= 0.0) || pi_b >= 1.0) {
        throw invalid_parameter("pi_b must lie in [0,1), got " + std::to_string(pi_b));
    }
    if (!(mean_burst_len >= 1.0)) {
        throw invalid_parameter("mean_burst_len must be >= 1, got " +
                                std::to_string(mean_burst_len));
    }
    GilbertParams p;
    p.pi_b = pi_b;
    p.mean_burst_len = mean_burst_len;
    p.p_bg = 1.0 / mean_burst_len;
    p.p_gb = pi_b == 0.0 ? 0.0 : pi_b / (mean_burst_len * (1.0 - pi_b));
    if (p.p_gb > 1.0) {
        throw invalid_parameter("pi_b=" + std::to_string(pi_b) + " with burst length " +
                                std::to_string(mean_burst_len) +
                                " implies a Good->Bad probability above 1");
    }
    p.p_gb = std::clamp(p.p_gb, 0.0, 1.0);
    p.p_bg = std::clamp(p.p_bg, 0.0, 1.0);
    return p;
}

/// Stationary distribution (pi_g, pi_b) of the two-state chain.
inline std::pair<double, double> stationary(const GilbertParams& p) {
    const double denom = p.p_gb + p.p_bg;
    if (!(denom > 0.0)) {
        throw invalid_parameter("stationary distribution undefined when both "
                                "transition probabilities are 0");
    }
    const double pi_b = p.p_gb / denom;
    return {1.0 - pi_b, pi_b};
}

enum class LossMode { gilbert, iid };

/// A half-open availability window [start_s, end_s).
struct Window {
    double start_s = 0.0;
    double end_s = 0.0;

    bool operator==(const Window&) const = default;
};

/// Static description of one wireless path. An empty availability list means
/// the path is always reachable.
struct PathSpec {
    std::string id;
    double bandwidth_kbps = 0.0;
    double prop_delay_ms = 0.0;
    GilbertParams loss;
    LossMode mode = LossMode::gilbert;
    std::vector<Window> availability; // sorted, non-overlapping

    bool operator==(const PathSpec&) const = default;
};

inline bool is_available(const PathSpec& spec, double t_s) {
    if (spec.availability.empty()) {
        return true;
    }
    for (const auto& w : spec.availability) {
        if (t_s >= w.start_s && t_s < w.end_s) {
            return true;
        }
    }
    return false;
}

/// Seconds needed to serialize packet_bytes at the path's bandwidth.
inline double serialization_s(const PathSpec& spec, int packet_bytes) {
    return 8.0 * packet_bytes / (1000.0 * spec.bandwidth_kbps);
}

enum class Fate { Delivered, Lost };

enum class ChainState { Good, Bad };

/// Live state of one path: the loss chain position, the serializer queue and
/// a dedicated random stream. Distinct PathStates never share state.
struct PathState {
    PathSpec spec;
    ChainState chain_state = ChainState::Good;
    double queue_free_at_s = 0.0;
    RngStream rng;

    PathState(PathSpec s, std::uint64_t seed) : spec(std::move(s)), rng(seed) {
        // Start the chain from its stationary distribution so short runs are
        // not biased by an arbitrary initial state. Consumes one draw.
        chain_state = rng.bernoulli(spec.loss.pi_b) ? ChainState::Bad : ChainState::Good;
    }
};

/// Advance the loss process one packet step and report the packet's fate.
/// In gilbert mode the chain moves first and the packet is lost iff the
/// resulting state is Bad; in iid mode each packet is an independent draw.
inline Fate next_fate(PathState& state) {
    const GilbertParams& p = state.spec.loss;
    if (state.spec.mode == LossMode::iid) {
        return state.rng.bernoulli(p.pi_b) ? Fate::Lost : Fate::Delivered;
    }
    if (state.chain_state == ChainState::Good) {
        if (state.rng.bernoulli(p.p_gb)) {
            state.chain_state = ChainState::Bad;
        }
    } else {
        if (state.rng.bernoulli(p.p_bg)) {
            state.chain_state = ChainState::Good;
        }
    }
    return state.chain_state == ChainState::Bad ? Fate::Lost : Fate::Delivered;
}

struct TransitResult {
    double arrival_time_s = 0.0;
    Fate fate = Fate::Delivered;
};

/// Push one packet through the path: serialize behind whatever the queue
/// still holds, then propagate. The loss fate is drawn per packet and is
/// independent of timing.
inline TransitResult transit(PathState& state, double send_time_s, int packet_bytes) {
    if (packet_bytes <= 0) {
        throw invalid_parameter("transit packet_bytes must be positive");
    }
    if (!is_available(state.spec, send_time_s)) {
        throw path_unavailable("path " + state.spec.id + " unavailable at t=" +
                               std::to_string(send_time_s));
    }
    const double start = std::max(send_time_s, state.queue_free_at_s);
    const double done = start + serialization_s(state.spec, packet_bytes);
    state.queue_free_at_s = done;
    TransitResult r;
    r.arrival_time_s = done + state.spec.prop_delay_ms / 1000.0;
    r.fate = next_fate(state);
    return r;
}

} // namespace pajscc::channel

#endif // PAJSCC_CHANNEL_HPP
