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
#ifndef PAJSCC_FEC_HPP
#define PAJSCC_FEC_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pajscc/errors.hpp"
#include "pajscc/gf256.hpp"

namespace pajscc::fec {

using Payload = std::vector<std::uint8_t>;

/// Shape of one FEC block: k source packets expanded to n total packets of
/// packet_bytes each. n is capped at 255 by the GF(256) symbol space.
struct FecBlockSpec {
    int k = 1;
    int n = 1;
    int packet_bytes = 1;

    void validate() const {
        if (k < 1 || n < k || n > 255) {
            throw invalid_parameter("FEC spec requires 1 <= k <= n <= 255, got k=" +
                                    std::to_string(k) + " n=" + std::to_string(n));
        }
        if (packet_bytes < 1) {
            throw invalid_parameter("FEC packet_bytes must be positive");
        }
    }

    double code_rate() const { return static_cast<double>(k) / static_cast<double>(n); }
    double expansion() const { return static_cast<double>(n) / static_cast<double>(k); }

    bool operator==(const FecBlockSpec&) const = default;
};

struct FecPacket {
    int index = 0; // 0..n-1; indices < k carry source payloads verbatim
    Payload payload;
};

struct EncodedBlock {
    FecBlockSpec spec;
    std::vector<FecPacket> packets; // always n entries, index i at position i
};

/// Outcome of decode. When ok, sources holds all k payloads. Otherwise only
/// the systematically received source packets are present; recovered_sources
/// lists their indices in ascending order.
struct DecodeResult {
    bool ok = false;
    std::vector<Payload> sources;        // size k; unrecovered entries empty when !ok
    std::vector<int> recovered_sources;  // ascending, == {0..k-1} when ok
};

namespace detail {

// Row-major byte matrix over GF(256).
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> a;

    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
    std::uint8_t& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    std::uint8_t at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// Gauss-Jordan inverse. The matrices inverted here are always nonsingular by
// construction (Vandermonde submatrices), so a singular pivot is a logic bug.
inline Matrix invert(Matrix m) {
    const int n = m.rows;
    Matrix inv(n, n);
    for (int i = 0; i < n; ++i) {
        inv.at(i, i) = 1;
    }
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (m.at(r, col) != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) {
            throw error("internal: singular matrix in RS decode");
        }
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(m.at(pivot, c), m.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        }
        const std::uint8_t piv_inv = gf256::inv(m.at(col, col));
        for (int c = 0; c < n; ++c) {
            m.at(col, c) = gf256::mul(m.at(col, c), piv_inv);
            inv.at(col, c) = gf256::mul(inv.at(col, c), piv_inv);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m.at(r, col) == 0) {
                continue;
            }
            const std::uint8_t f = m.at(r, col);
            for (int c = 0; c < n; ++c) {
                m.at(r, c) ^= gf256::mul(f, m.at(col, c));
                inv.at(r, c) ^= gf256::mul(f, inv.at(col, c));
            }
        }
    }
    return inv;
}

// Systematic generator matrix: a Vandermonde matrix V (nodes 0..n-1)
// right-multiplied by the inverse of its top k rows. The top k rows of the
// product are the identity, and every k-row submatrix stays invertible.
inline Matrix generator(int k, int n) {
    Matrix v(n, k);
    for (int r = 0; r < n; ++r) {
        std::uint8_t x = static_cast<std::uint8_t>(r);
        std::uint8_t p = 1;
        for (int c = 0; c < k; ++c) {
            v.at(r, c) = p;
            p = gf256::mul(p, x);
        }
    }
    Matrix top(k, k);
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            top.at(r, c) = v.at(r, c);
        }
    }
    const Matrix top_inv = invert(std::move(top));
    Matrix g(n, k);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < k; ++c) {
            std::uint8_t acc = 0;
            for (int t = 0; t < k; ++t) {
                acc ^= gf256::mul(v.at(r, t), top_inv.at(t, c));
            }
            g.at(r, c) = acc;
        }
    }
    return g;
}

} // namespace detail

/// Encode k source payloads into n packets. Packets 0..k-1 are the source
/// verbatim; packets k..n-1 carry Reed-Solomon parity computed byte-column-wise.
inline EncodedBlock encode(const std::vector<Payload>& source, const FecBlockSpec& spec) {
    spec.validate();
    if (static_cast<int>(source.size()) != spec.k) {
        throw invalid_parameter("encode expects exactly k=" + std::to_string(spec.k) +
                                " payloads, got " + std::to_string(source.size()));
    }
    for (const auto& p : source) {
        if (static_cast<int>(p.size()) != spec.packet_bytes) {
            throw invalid_parameter("encode payload size mismatch: expected " +
                                    std::to_string(spec.packet_bytes) + " bytes, got " +
                                    std::to_string(p.size()));
        }
    }

    EncodedBlock block;
    block.spec = spec;
    block.packets.reserve(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.k; ++i) {
        block.packets.push_back({i, source[static_cast<std::size_t>(i)]});
    }
    if (spec.n == spec.k) {
        return block;
    }

    const detail::Matrix g = detail::generator(spec.k, spec.n);
    for (int r = spec.k; r < spec.n; ++r) {
        Payload parity(static_cast<std::size_t>(spec.packet_bytes), 0);
        for (int c = 0; c < spec.k; ++c) {
            const std::uint8_t coef = g.at(r, c);
            if (coef == 0) {
                continue;
            }
            const Payload& src = source[static_cast<std::size_t>(c)];
            for (int b = 0; b < spec.packet_bytes; ++b) {
                parity[static_cast<std::size_t>(b)] ^=
                    gf256::mul(coef, src[static_cast<std::size_t>(b)]);
            }
        }
        block.packets.push_back({r, std::move(parity)});
    }
    return block;
}

/// Reconstruct the k source payloads from any >= k received packets.
/// With fewer than k, returns a failure result that still carries every
/// systematically received source packet.
inline DecodeResult decode(const std::vector<FecPacket>& received, const FecBlockSpec& spec) {
    spec.validate();
    std::vector<bool> seen(static_cast<std::size_t>(spec.n), false);
    for (const auto& pkt : received) {
        if (pkt.index < 0 || pkt.index >= spec.n) {
            throw corrupt_index("packet index " + std::to_string(pkt.index) +
                                " out of range 0.." + std::to_string(spec.n - 1));
        }
        if (seen[static_cast<std::size_t>(pkt.index)]) {
            throw corrupt_index("duplicate packet index " + std::to_string(pkt.index));
        }
        if (static_cast<int>(pkt.payload.size()) != spec.packet_bytes) {
            throw invalid_parameter("decode payload size mismatch at index " +
                                    std::to_string(pkt.index));
        }
        seen[static_cast<std::size_t>(pkt.index)] = true;
    }

    DecodeResult result;
    result.sources.resize(static_cast<std::size_t>(spec.k));

    std::vector<const FecPacket*> parity;
    for (const auto& pkt : received) {
        if (pkt.index < spec.k) {
            result.sources[static_cast<std::size_t>(pkt.index)] = pkt.payload;
            result.recovered_sources.push_back(pkt.index);
        } else {
            parity.push_back(&pkt);
        }
    }
    std::sort(result.recovered_sources.begin(), result.recovered_sources.end());
    std::sort(parity.begin(), parity.end(),
              [](const FecPacket* a, const FecPacket* b) { return a->index < b->index; });

    std::vector<int> missing;
    for (int i = 0; i < spec.k; ++i) {
        if (!seen[static_cast<std::size_t>(i)]) {
            missing.push_back(i);
        }
    }

    if (missing.empty()) {
        result.ok = true;
        return result;
    }
    if (static_cast<int>(received.size()) < spec.k) {
        return result; // not enough packets; failure with the systematic survivors
    }

    // Solve for the missing sources from the first m received parity packets:
    // for each such parity row p, y_p = parity_p - sum over received sources,
    // and y = A * missing with A the parity rows restricted to missing columns.
    const int m = static_cast<int>(missing.size());
    const detail::Matrix g = detail::generator(spec.k, spec.n);

    detail::Matrix a(m, m);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            a.at(r, c) = g.at(parity[static_cast<std::size_t>(r)]->index,
                              missing[static_cast<std::size_t>(c)]);
        }
    }
    const detail::Matrix a_inv = detail::invert(std::move(a));

    std::vector<Payload> y(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
        const FecPacket& pkt = *parity[static_cast<std::size_t>(r)];
        Payload acc = pkt.payload;
        for (int c = 0; c < spec.k; ++c) {
            if (!seen[static_cast<std::size_t>(c)]) {
                continue;
            }
            const std::uint8_t coef = g.at(pkt.index, c);
            if (coef == 0) {
                continue;
            }
            const Payload& src = result.sources[static_cast<std::size_t>(c)];
            for (int b = 0; b < spec.packet_bytes; ++b) {
                acc[static_cast<std::size_t>(b)] ^=
                    gf256::mul(coef, src[static_cast<std::size_t>(b)]);
            }
        }
        y[static_cast<std::size_t>(r)] = std::move(acc);
    }

    for (int r = 0; r < m; ++r) {
        Payload rec(static_cast<std::size_t>(spec.packet_bytes), 0);
        for (int c = 0; c < m; ++c) {
            const std::uint8_t coef = a_inv.at(r, c);
            if (coef == 0) {
                continue;
            }
            const Payload& src = y[static_cast<std::size_t>(c)];
            for (int b = 0; b < spec.packet_bytes; ++b) {
                rec[static_cast<std::size_t>(b)] ^=
                    gf256::mul(coef, src[static_cast<std::size_t>(b)]);
            }
        }
        result.sources[static_cast<std::size_t>(missing[static_cast<std::size_t>(r)])] =
            std::move(rec);
    }

    result.ok = true;
    result.recovered_sources.clear();
    for (int i = 0; i < spec.k; ++i) {
        result.recovered_sources.push_back(i);
    }
    return result;
}

} // namespace pajscc::fec

#endif // PAJSCC_FEC_HPP
