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
#ifndef PAJSCC_GOP_HPP
#define PAJSCC_GOP_HPP

#include <cmath>

#include "pajscc/errors.hpp"

namespace pajscc::sim {

/// Group-of-pictures timing. The GoP is the unit of rate adaptation and FEC
/// blocking; one block's deadline is its GoP start plus playout offset plus
/// one GoP duration.
struct GopSpec {
    int frames_per_gop = 8;
    double frame_rate_fps = 30.0;
    double playout_offset_s = 0.4; // startup delay before the first deadline

    double gop_duration_s() const { return frames_per_gop / frame_rate_fps; }

    bool operator==(const GopSpec&) const = default;
};

/// Source packets needed to carry v_kbps for one GoP at packet_bytes per
/// packet. Always at least 1.
inline int packetize(double v_kbps, const GopSpec& gop, int packet_bytes) {
    if (!(v_kbps > 0.0)) {
        throw invalid_parameter("packetize requires a positive source rate");
    }
    if (packet_bytes <= 0) {
        throw invalid_parameter("packetize requires positive packet_bytes");
    }
    const double bits = v_kbps * 1000.0 * gop.gop_duration_s();
    const int k = static_cast<int>(std::ceil(bits / (8.0 * packet_bytes)));
    return k < 1 ? 1 : k;
}

} // namespace pajscc::sim

#endif // PAJSCC_GOP_HPP
