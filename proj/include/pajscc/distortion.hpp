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
#ifndef PAJSCC_DISTORTION_HPP
#define PAJSCC_DISTORTION_HPP

#include <cmath>
#include <string>

#include "pajscc/errors.hpp"

namespace pajscc::distortion {

/// Codec/sequence constants of the parametric rate-distortion model.
/// Source distortion falls off as alpha/(V - v0) above the rate offset v0;
/// channel distortion grows linearly in the effective loss rate with slope
/// beta. All distortions are in mean-square-error units for 8-bit video.
struct DistortionParams {
    double d0 = 0.0;    // baseline source distortion (MSE)
    double alpha = 1.0; // rate-distortion slope (MSE * Kbps), > 0
    double v0 = 0.0;    // rate offset (Kbps)
    double beta = 0.0;  // MSE per unit effective loss rate, >= 0

    bool operator==(const DistortionParams&) const = default;
};

/// Source distortion at encoding rate v_kbps. Only defined for v > v0.
inline double d_src(const DistortionParams& p, double v_kbps) {
    if (!(v_kbps > p.v0)) {
        throw invalid_parameter("source rate " + std::to_string(v_kbps) +
                                " Kbps must exceed the model offset v0=" +
                                std::to_string(p.v0));
    }
    return p.d0 + p.alpha / (v_kbps - p.v0);
}

/// End-to-end distortion: source term plus loss-driven channel term.
inline double d_total(const DistortionParams& p, double v_kbps, double pi_star) {
    if (!(pi_star >= 0.0 && pi_star <= 1.0)) {
        throw invalid_parameter("pi_star must lie in [0,1]");
    }
    return d_src(p, v_kbps) + p.beta * pi_star;
}

inline constexpr double kPixelPeak = 255.0; // 8-bit video convention

/// PSNR in dB for a strictly positive MSE. Callers clamp mse away from 0
/// themselves; an infinite sentinel is deliberately not produced here.
inline double mse_to_psnr(double mse) {
    if (!(mse > 0.0)) {
        throw invalid_parameter("mse must be positive for PSNR conversion");
    }
    return 10.0 * std::log10(kPixelPeak * kPixelPeak / mse);
}

/// Inverse of mse_to_psnr.
inline double psnr_to_mse(double psnr_db) {
    return kPixelPeak * kPixelPeak / std::pow(10.0, psnr_db / 10.0);
}

} // namespace pajscc::distortion

#endif // PAJSCC_DISTORTION_HPP
