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
#ifndef PAJSCC_ALLOCATOR_HPP
#define PAJSCC_ALLOCATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pajscc/distortion.hpp"
#include "pajscc/errors.hpp"
#include "pajscc/estimator.hpp"
#include "pajscc/gop.hpp"

namespace pajscc::allocator {

/// What the sender currently believes about one path. Fed by delayed,
/// smoothed receiver feedback, so values generally differ from the
/// channel truth.
struct PathEstimate {
    std::string path_id;
    double est_bandwidth_kbps = 0.0;
    double est_delay_ms = 0.0;
    double est_loss = 0.0;      // per-packet loss probability in [0,1]
    double est_burst_len = 1.0; // mean loss burst length, packets
    double staleness_s = 0.0;   // age of the newest observation folded in

    friend bool operator==(const PathEstimate&, const PathEstimate&) = default;
};

/// Search space and budget policy for the per-GoP optimizer.
struct SearchGrid {
    std::vector<double> v_candidates_kbps; // ascending, all above the model's v0
    int n_max = 255;                        // hard cap on block length
    double headroom = 0.95;                 // usable fraction of estimated bandwidth
    double max_expansion = 4.0;             // n <= k * max_expansion

    friend bool operator==(const SearchGrid&, const SearchGrid&) = default;
};

struct AllocationDecision {
    std::vector<std::string> selected;  // path ids, ascending
    std::vector<double> weights;        // split weights, aligned with selected
    double source_rate_kbps = 0.0;
    int fec_k = 0;
    int fec_n = 0;
    double predicted_pi_star = 0.0;
    double predicted_mse = 0.0;
    bool degraded = false; // no grid point satisfied the constraints

    friend bool operator==(const AllocationDecision&, const AllocationDecision&) = default;
};

/// True iff rate V with expansion n/k fits every selected path's share and
/// the aggregate budget, both scaled by headroom. Weights need not be
/// normalized. Non-strict: a load exactly at the budget passes.
inline bool check_constraints(double v_kbps, int n, int k,
                              const std::vector<double>& weights,
                              const std::vector<PathEstimate>& selected,
                              double headroom) {
    if (v_kbps <= 0.0) throw invalid_parameter("check_constraints: v_kbps must be positive");
    if (k < 1 || n < k) throw invalid_parameter("check_constraints: need n >= k >= 1");
    if (weights.size() != selected.size())
        throw invalid_parameter("check_constraints: weights/selected size mismatch");
    if (selected.empty()) return false;
    if (!(headroom > 0.0)) throw invalid_parameter("check_constraints: headroom must be positive");

    double weight_sum = 0.0;
    double bw_sum = 0.0;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (!(weights[i] > 0.0))
            throw invalid_parameter("check_constraints: weights must be positive");
        weight_sum += weights[i];
        bw_sum += selected[i].est_bandwidth_kbps;
    }
    const double load = v_kbps * static_cast<double>(n) / static_cast<double>(k);
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (load * weights[i] / weight_sum > headroom * selected[i].est_bandwidth_kbps)
            return false;
    }
    return load <= headroom * bw_sum;
}

struct Prediction {
    double pi_star = 0.0;
    double block_failure_prob = 0.0;
    double mse = 0.0;
    estimator::PacketAssignment assignment;
};

namespace detail {

/// Packets on one path go out back to back, so the i-th needs
/// i*serialization + propagation to arrive. Counts how many of m fit the
/// deadline; the rest are written off as certain losses.
inline int on_time_count(const PathEstimate& est, int m, int packet_bytes, double deadline_s) {
    if (m <= 0) return 0;
    if (!(est.est_bandwidth_kbps > 0.0)) return 0;
    const double dt = 8.0 * static_cast<double>(packet_bytes) / (1000.0 * est.est_bandwidth_kbps);
    const double budget = deadline_s - est.est_delay_ms / 1000.0;
    if (budget < dt) return 0;
    const int fit = static_cast<int>(std::floor(budget / dt));
    return std::min(m, fit);
}

} // namespace detail

/// Predicts residual source loss and distortion for one concrete choice.
/// Packet slices are contiguous in `selected` order, sources first, so a
/// path's slice straddles the source/parity boundary at most once.
inline Prediction predict(const std::vector<PathEstimate>& selected,
                          const std::vector<double>& weights, double v_kbps, int n, int k,
                          const sim::GopSpec& gop, int packet_bytes,
                          const distortion::DistortionParams& dist, double deadline_s) {
    (void)gop;
    Prediction out;
    out.assignment = estimator::largest_remainder_split(n, weights);

    std::vector<estimator::LossSegment> segments;
    segments.reserve(2 * selected.size());
    int start = 0;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        const int m = out.assignment.counts[i];
        if (m == 0) continue;
        const int on_time = detail::on_time_count(selected[i], m, packet_bytes, deadline_s);
        const double p = std::clamp(selected[i].est_loss, 0.0, 1.0);
        // [start, start+on_time) race the channel; the overdue tail is gone
        // regardless of fate.
        const auto add = [&](int lo, int hi, double loss_prob) {
            if (hi <= lo) return;
            const int src = std::clamp(k - lo, 0, hi - lo);
            segments.push_back({src, (hi - lo) - src, loss_prob});
        };
        add(start, start + on_time, p);
        add(start + on_time, start + m, 1.0);
        start += m;
    }

    const auto loss = estimator::residual_loss_segments(segments, k);
    out.pi_star = loss.pi_star;
    out.block_failure_prob = loss.block_failure_prob;
    out.mse = distortion::d_total(dist, v_kbps, loss.pi_star);
    return out;
}

/// Scores one (subset, V, n) grid point, weighting the split by estimated
/// bandwidth. Returns the predicted MSE; throws infeasible when the point
/// violates the rate constraints.
inline double evaluate(const std::vector<PathEstimate>& selected, double v_kbps, int n,
                       const sim::GopSpec& gop, int packet_bytes,
                       const distortion::DistortionParams& dist, double deadline_s,
                       double headroom = 0.95) {
    const int k = sim::packetize(v_kbps, gop, packet_bytes);
    if (n < k) throw invalid_parameter("evaluate: n below source packet count");
    std::vector<double> weights;
    weights.reserve(selected.size());
    for (const auto& est : selected) weights.push_back(est.est_bandwidth_kbps);
    if (!check_constraints(v_kbps, n, k, weights, selected, headroom))
        throw infeasible("evaluate: rate constraints violated");
    return predict(selected, weights, v_kbps, n, k, gop, packet_bytes, dist, deadline_s).mse;
}

namespace detail {

struct Candidate {
    double mse = std::numeric_limits<double>::infinity();
    int n = 0;
    double v_kbps = 0.0;
    std::size_t path_count = 0;
    std::vector<std::string> ids;
    AllocationDecision decision;
};

/// Strict preference order; deterministic because no two candidates share
/// the whole tuple (ids, v, n).
inline bool better(const Candidate& a, const Candidate& b) {
    if (a.mse != b.mse) return a.mse < b.mse;
    if (a.n != b.n) return a.n < b.n;
    if (a.v_kbps != b.v_kbps) return a.v_kbps > b.v_kbps;
    if (a.path_count != b.path_count) return a.path_count < b.path_count;
    return a.ids < b.ids;
}

} // namespace detail

/// Exhaustive per-GoP search over path subsets, source rates, and block
/// lengths. Candidates are limited to 8 paths so the subset enumeration
/// stays trivially cheap. When no grid point is feasible the decision
/// degrades to the lowest rate, no parity, best single path, and is
/// flagged as such.
inline AllocationDecision allocate(const std::vector<PathEstimate>& candidates,
                                   const SearchGrid& grid, const sim::GopSpec& gop,
                                   int packet_bytes, const distortion::DistortionParams& dist,
                                   double deadline_s) {
    if (candidates.empty()) throw no_paths("allocate: no candidate paths");
    if (candidates.size() > 8)
        throw invalid_parameter("allocate: more than 8 candidate paths");
    if (grid.v_candidates_kbps.empty())
        throw invalid_parameter("allocate: empty rate grid");
    if (!std::is_sorted(grid.v_candidates_kbps.begin(), grid.v_candidates_kbps.end()))
        throw invalid_parameter("allocate: rate grid must be ascending");
    for (double v : grid.v_candidates_kbps)
        if (!(v > dist.v0))
            throw invalid_parameter("allocate: rate grid entry at or below v0");
    if (!(grid.headroom > 0.0) || grid.headroom > 1.0)
        throw invalid_parameter("allocate: headroom outside (0, 1]");
    if (grid.n_max < 1 || grid.n_max > 255)
        throw invalid_parameter("allocate: n_max outside [1, 255]");
    if (!(grid.max_expansion >= 1.0))
        throw invalid_parameter("allocate: max_expansion below 1");
    if (!(deadline_s > 0.0)) throw invalid_parameter("allocate: deadline must be positive");

    std::vector<PathEstimate> sorted(candidates);
    std::sort(sorted.begin(), sorted.end(),
              [](const PathEstimate& a, const PathEstimate& b) { return a.path_id < b.path_id; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].path_id == sorted[i - 1].path_id)
            throw invalid_parameter("allocate: duplicate path id " + sorted[i].path_id);
    for (const auto& est : sorted)
        if (est.est_loss < 0.0 || est.est_loss > 1.0)
            throw invalid_parameter("allocate: est_loss outside [0, 1] on " + est.path_id);

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i].est_bandwidth_kbps > 0.0) usable.push_back(i);

    detail::Candidate best;
    bool found = false;

    const std::size_t subset_count = std::size_t{1} << usable.size();
    std::vector<PathEstimate> subset;
    std::vector<double> weights;
    std::vector<std::string> ids;
    for (std::size_t mask = 1; mask < subset_count; ++mask) {
        subset.clear();
        weights.clear();
        ids.clear();
        double bw_sum = 0.0;
        for (std::size_t bit = 0; bit < usable.size(); ++bit) {
            if (!(mask & (std::size_t{1} << bit))) continue;
            const auto& est = sorted[usable[bit]];
            subset.push_back(est);
            weights.push_back(est.est_bandwidth_kbps);
            ids.push_back(est.path_id);
            bw_sum += est.est_bandwidth_kbps;
        }
        for (double v : grid.v_candidates_kbps) {
            // At n == k the aggregate load equals V, so once V alone busts the
            // subset budget no larger V or n can recover.
            if (v > grid.headroom * bw_sum) break;
            const int k = sim::packetize(v, gop, packet_bytes);
            const int n_hi = std::min(grid.n_max,
                                      static_cast<int>(std::floor(static_cast<double>(k) *
                                                                  grid.max_expansion)));
            for (int n = k; n <= n_hi; ++n) {
                if (!check_constraints(v, n, k, weights, subset, grid.headroom)) break;
                const auto pred = predict(subset, weights, v, n, k, gop, packet_bytes, dist,
                                          deadline_s);
                detail::Candidate cand;
                cand.mse = pred.mse;
                cand.n = n;
                cand.v_kbps = v;
                cand.path_count = subset.size();
                cand.ids = ids;
                cand.decision = AllocationDecision{ids, weights, v, k, n,
                                                   pred.pi_star, pred.mse, false};
                if (!found || detail::better(cand, best)) {
                    best = std::move(cand);
                    found = true;
                }
            }
        }
    }
    if (found) return best.decision;

    // Degraded fallback: keep the stream alive at the lowest rate on the
    // single strongest path, no parity. Constraints are knowingly ignored.
    const PathEstimate* pick = &sorted.front();
    for (const auto& est : sorted)
        if (est.est_bandwidth_kbps > pick->est_bandwidth_kbps) pick = &est;
    const double v = grid.v_candidates_kbps.front();
    const int k = sim::packetize(v, gop, packet_bytes);
    const std::vector<PathEstimate> alone{*pick};
    const std::vector<double> w{1.0};
    const auto pred = predict(alone, w, v, k, k, gop, packet_bytes, dist, deadline_s);
    return AllocationDecision{{pick->path_id}, w, v, k, k, pred.pi_star, pred.mse, true};
}

} // namespace pajscc::allocator

#endif // PAJSCC_ALLOCATOR_HPP
