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
#ifndef PAJSCC_GF256_HPP
#define PAJSCC_GF256_HPP

#include <array>
#include <cstdint>

#include "pajscc/errors.hpp"

namespace pajscc::gf256 {

// GF(2^8) with the primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D)
// and generator element 2.

namespace detail {

struct Tables {
    // exp_ is doubled so mul can skip a modulo-255 reduction.
    std::array<std::uint8_t, 510> exp_;
    std::array<int, 256> log_;

    constexpr Tables() : exp_(), log_() {
        int x = 1;
        for (int i = 0; i < 255; ++i) {
            exp_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
            exp_[static_cast<std::size_t>(i + 255)] = static_cast<std::uint8_t>(x);
            log_[static_cast<std::size_t>(x)] = i;
            x <<= 1;
            if (x & 0x100) {
                x ^= 0x11D;
            }
        }
        log_[0] = -1; // log of zero is undefined
    }
};

inline constexpr Tables tables{};

} // namespace detail

inline constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) {
    return a ^ b;
}

inline constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) {
        return 0;
    }
    return detail::tables.exp_[static_cast<std::size_t>(
        detail::tables.log_[a] + detail::tables.log_[b])];
}

inline constexpr std::uint8_t inv(std::uint8_t a) {
    if (a == 0) {
        throw invalid_parameter("gf256: zero has no inverse");
    }
    return detail::tables.exp_[static_cast<std::size_t>(255 - detail::tables.log_[a])];
}

inline constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) {
    if (b == 0) {
        throw invalid_parameter("gf256: division by zero");
    }
    if (a == 0) {
        return 0;
    }
    int d = detail::tables.log_[a] - detail::tables.log_[b];
    if (d < 0) {
        d += 255;
    }
    return detail::tables.exp_[static_cast<std::size_t>(d)];
}

/// alpha^e for e >= 0.
inline constexpr std::uint8_t exp(int e) {
    return detail::tables.exp_[static_cast<std::size_t>(e % 255)];
}

} // namespace pajscc::gf256

#endif // PAJSCC_GF256_HPP
