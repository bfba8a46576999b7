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
#ifndef PAJSCC_ESTIMATOR_HPP
#define PAJSCC_ESTIMATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pajscc/channel.hpp"
#include "pajscc/errors.hpp"
#include "pajscc/fec.hpp"
#include "pajscc/rng.hpp"

namespace pajscc::estimator {

/// Per-path packet counts for one FEC block. counts[r] == 0 for every path
/// outside the selected set.
struct PacketAssignment {
    std::vector<int> counts;

    int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

    bool operator==(const PacketAssignment&) const = default;
};

/// Split n packets across paths proportionally to weights using the largest
/// remainder method. Ties go to the lower path index, so the split is total
/// and deterministic. This is the one rounding rule shared by the estimator,
/// the allocator and the distributor.
inline PacketAssignment largest_remainder_split(int n, const std::vector<double>& weights) {
    if (n < 0) {
        throw invalid_parameter("cannot split a negative packet count");
    }
    if (weights.empty()) {
        throw invalid_parameter("largest_remainder_split needs at least one weight");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) {
            throw invalid_parameter("weights must be positive");
        }
        sum += w;
    }

    const std::size_t m = weights.size();
    PacketAssignment a;
    a.counts.resize(m, 0);
    std::vector<double> frac(m, 0.0);
    int assigned = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double exact = n * weights[i] / sum;
        a.counts[i] = static_cast<int>(std::floor(exact));
        frac[i] = exact - a.counts[i];
        assigned += a.counts[i];
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return frac[x] > frac[y]; });
    for (int left = n - assigned, i = 0; left > 0; --left, ++i) {
        a.counts[order[static_cast<std::size_t>(i)]] += 1;
    }
    return a;
}

/// Expected unrecovered source-packet fraction after FEC and deadline
/// filtering, plus the probability that the whole block fails to decode.
struct EffectiveLoss {
    double pi_star = 0.0;
    double block_failure_prob = 0.0;
};

/// P(fewer than k of n packets received) when every packet is lost
/// independently with probability p. Computed by folding the loss count
/// distribution one packet at a time, which is exact in double precision
/// for the block sizes allowed here.
inline double block_failure_prob_iid(int n, int k, double p) {
    if (k < 1 || n < k || n > 255) {
        throw invalid_parameter("block_failure_prob_iid requires 1 <= k <= n <= 255");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw invalid_parameter("loss probability must lie in [0,1]");
    }
    // dist[j] = P(j packets lost so far)
    std::vector<double> dist(static_cast<std::size_t>(n) + 1, 0.0);
    dist[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j >= 1; --j) {
            dist[static_cast<std::size_t>(j)] =
                dist[static_cast<std::size_t>(j)] * (1.0 - p) +
                dist[static_cast<std::size_t>(j - 1)] * p;
        }
        dist[0] *= 1.0 - p;
    }
    double fail = 0.0;
    for (int lost = n - k + 1; lost <= n; ++lost) {
        fail += dist[static_cast<std::size_t>(lost)];
    }
    return fail;
}

/// A run of packets sharing one loss probability, split into source-carrying
/// and parity-carrying counts. Deterministically overdue packets are modeled
/// as a segment with loss_prob == 1.
struct LossSegment {
    int n_source = 0;
    int n_parity = 0;
    double loss_prob = 0.0;
};

/// Exact effective loss for independently lost packets grouped in segments.
///
/// Received source count S and received parity count Q are sums over disjoint
/// independent packet sets, so their distributions convolve separately and
///   pi_star        = (1/k) * sum_s P(S=s) * (k-s) * P(Q < k-s)
///   block_failure  =         sum_s P(S=s) *         P(Q < k-s)
/// which credits systematically received source packets when decode fails.
inline EffectiveLoss residual_loss_segments(const std::vector<LossSegment>& segments, int k) {
    if (k < 1) {
        throw invalid_parameter("residual_loss_segments requires k >= 1");
    }
    int total_source = 0;
    int total_parity = 0;
    for (const auto& seg : segments) {
        if (seg.n_source < 0 || seg.n_parity < 0) {
            throw invalid_parameter("segment counts must be non-negative");
        }
        if (!(seg.loss_prob >= 0.0 && seg.loss_prob <= 1.0)) {
            throw invalid_parameter("segment loss probability must lie in [0,1]");
        }
        total_source += seg.n_source;
        total_parity += seg.n_parity;
    }
    if (total_source != k) {
        throw invalid_parameter("segments carry " + std::to_string(total_source) +
                                " source packets, expected k=" + std::to_string(k));
    }

    std::vector<double> ps(static_cast<std::size_t>(k) + 1, 0.0); // P(S = s)
    std::vector<double> pq(static_cast<std::size_t>(total_parity) + 1, 0.0);
    ps[0] = 1.0;
    pq[0] = 1.0;
    int s_seen = 0;
    int q_seen = 0;
    for (const auto& seg : segments) {
        const double q_recv = 1.0 - seg.loss_prob;
        for (int i = 0; i < seg.n_source; ++i, ++s_seen) {
            for (int j = s_seen + 1; j >= 1; --j) {
                ps[static_cast<std::size_t>(j)] =
                    ps[static_cast<std::size_t>(j)] * seg.loss_prob +
                    ps[static_cast<std::size_t>(j - 1)] * q_recv;
            }
            ps[0] *= seg.loss_prob;
        }
        for (int i = 0; i < seg.n_parity; ++i, ++q_seen) {
            for (int j = q_seen + 1; j >= 1; --j) {
                pq[static_cast<std::size_t>(j)] =
                    pq[static_cast<std::size_t>(j)] * seg.loss_prob +
                    pq[static_cast<std::size_t>(j - 1)] * q_recv;
            }
            pq[0] *= seg.loss_prob;
        }
    }

    // cdf_q[t] = P(Q <= t)
    std::vector<double> cdf_q(pq.size(), 0.0);
    double acc = 0.0;
    for (std::size_t t = 0; t < pq.size(); ++t) {
        acc += pq[t];
        cdf_q[t] = acc;
    }
    const auto q_below = [&](int t) { // P(Q < t)
        if (t <= 0) {
            return 0.0;
        }
        if (t > total_parity) {
            return 1.0;
        }
        return cdf_q[static_cast<std::size_t>(t - 1)];
    };

    EffectiveLoss out;
    for (int s = 0; s <= k; ++s) {
        const double w = ps[static_cast<std::size_t>(s)] * q_below(k - s);
        out.block_failure_prob += w;
        out.pi_star += w * (k - s);
    }
    out.pi_star /= k;
    return out;
}

/// Exact effective loss for a weighted packet split across paths with
/// independent (iid) per-packet loss. Packet indices 0..n-1 are assigned to
/// paths as contiguous slices in path order, so a path's slice overlaps the
/// source range [0,k) by a computable amount.
inline EffectiveLoss residual_loss_iid(const PacketAssignment& assignment, int k,
                                       const std::vector<double>& per_path_loss) {
    if (assignment.counts.size() != per_path_loss.size()) {
        throw invalid_parameter("assignment and per-path loss sizes differ");
    }
    const int n = assignment.total();
    if (n < k) {
        throw invalid_parameter("assignment carries fewer packets than k");
    }
    std::vector<LossSegment> segments;
    segments.reserve(assignment.counts.size());
    int start = 0;
    for (std::size_t r = 0; r < assignment.counts.size(); ++r) {
        const int m = assignment.counts[r];
        if (m < 0) {
            throw invalid_parameter("negative per-path packet count");
        }
        if (m == 0) {
            continue;
        }
        const int end = start + m;
        LossSegment seg;
        seg.n_source = std::max(0, std::min(end, k) - std::min(start, k));
        seg.n_parity = m - seg.n_source;
        seg.loss_prob = per_path_loss[r];
        segments.push_back(seg);
        start = end;
    }
    return residual_loss_segments(segments, k);
}

/// One entry of a send schedule: packet i goes on schedule[i].
struct PacketSend {
    int path_index = 0;
    double send_time_s = 0.0;
};

struct McEffectiveLoss {
    EffectiveLoss value;
    double pi_star_se = 0.0;
    double block_failure_se = 0.0;
    int trials = 0;
};

/// Monte Carlo effective loss under the full channel model: per-trial Gilbert
/// (or iid) fates plus serialization/propagation timing, counting a packet as
/// erased when it is lost or arrives after deadline_s. Deterministic given
/// the seed; trial t uses sub-streams derived from (seed, t, path).
inline McEffectiveLoss effective_loss_mc(const std::vector<channel::PathSpec>& paths,
                                         const std::vector<PacketSend>& schedule,
                                         const fec::FecBlockSpec& spec, double deadline_s,
                                         int trials, std::uint64_t seed) {
    spec.validate();
    if (trials < 1) {
        throw invalid_parameter("effective_loss_mc requires trials >= 1");
    }
    if (static_cast<int>(schedule.size()) != spec.n) {
        throw invalid_parameter("schedule must cover all n packets");
    }
    for (const auto& s : schedule) {
        if (s.path_index < 0 || s.path_index >= static_cast<int>(paths.size())) {
            throw invalid_parameter("schedule references unknown path index " +
                                    std::to_string(s.path_index));
        }
    }

    double sum_pi = 0.0;
    double sum_pi2 = 0.0;
    double sum_fail = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<channel::PathState> states;
        states.reserve(paths.size());
        for (std::size_t r = 0; r < paths.size(); ++r) {
            states.emplace_back(paths[r],
                                derive_seed(seed, static_cast<std::uint64_t>(t), r));
        }
        int total_rx = 0;
        int source_rx = 0;
        for (int i = 0; i < spec.n; ++i) {
            const auto& send = schedule[static_cast<std::size_t>(i)];
            auto res = channel::transit(states[static_cast<std::size_t>(send.path_index)],
                                        send.send_time_s, spec.packet_bytes);
            const bool on_time =
                res.fate == channel::Fate::Delivered && res.arrival_time_s <= deadline_s;
            if (on_time) {
                ++total_rx;
                if (i < spec.k) {
                    ++source_rx;
                }
            }
        }
        const bool failed = total_rx < spec.k;
        const double pi = failed ? static_cast<double>(spec.k - source_rx) / spec.k : 0.0;
        sum_pi += pi;
        sum_pi2 += pi * pi;
        sum_fail += failed ? 1.0 : 0.0;
    }

    McEffectiveLoss out;
    out.trials = trials;
    out.value.pi_star = sum_pi / trials;
    out.value.block_failure_prob = sum_fail / trials;
    if (trials > 1) {
        const double var_pi =
            std::max(0.0, (sum_pi2 - sum_pi * sum_pi / trials) / (trials - 1));
        out.pi_star_se = std::sqrt(var_pi / trials);
        const double pf = out.value.block_failure_prob;
        const double var_fail = std::max(0.0, pf * (1.0 - pf) * trials / (trials - 1));
        out.block_failure_se = std::sqrt(var_fail / trials);
    }
    return out;
}

} // namespace pajscc::estimator

#endif // PAJSCC_ESTIMATOR_HPP
