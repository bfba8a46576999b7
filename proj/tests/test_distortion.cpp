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
#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "pajscc/distortion.hpp"
#include "pajscc/errors.hpp"
#include "pajscc/rng.hpp"

using namespace pajscc;
using namespace pajscc::distortion;
using Catch::Matchers::WithinAbs;

TEST_CASE("d_src worked values") {
    CHECK_THAT(d_src({0.0, 1.0, 0.0, 0.0}, 1.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(d_src({1.0, 3000.0, 50.0, 0.0}, 350.0), WithinAbs(11.0, 1e-12));
    // Asymptote: the source term vanishes at very high rates.
    CHECK_THAT(d_src({2.5, 3000.0, 50.0, 0.0}, 1e12), WithinAbs(2.5, 1e-6));
}

TEST_CASE("d_src rejects rates at or below the offset") {
    CHECK_THROWS_AS(d_src({0.0, 1.0, 50.0, 0.0}, 50.0), invalid_parameter);
    CHECK_THROWS_AS(d_src({0.0, 1.0, 50.0, 0.0}, 10.0), invalid_parameter);
}

TEST_CASE("d_total worked values") {
    const DistortionParams p{1.0, 3000.0, 50.0, 5000.0};
    CHECK_THAT(d_total(p, 350.0, 0.0), WithinAbs(d_src(p, 350.0), 1e-15));
    CHECK_THAT(d_total(p, 350.0, 0.01), WithinAbs(61.0, 1e-12));
    const DistortionParams no_beta{1.0, 3000.0, 50.0, 0.0};
    CHECK_THAT(d_total(no_beta, 350.0, 0.9), WithinAbs(11.0, 1e-12));
    CHECK_THROWS_AS(d_total(p, 350.0, -0.1), invalid_parameter);
    CHECK_THROWS_AS(d_total(p, 350.0, 1.1), invalid_parameter);
}

TEST_CASE("monotonicity via sampled finite differences") {
    RngStream rng(61);
    for (int t = 0; t < 100; ++t) {
        const DistortionParams p{rng.uniform(0.0, 5.0), rng.uniform(100.0, 9000.0),
                                 rng.uniform(0.0, 100.0), rng.uniform(1.0, 9000.0)};
        const double v = p.v0 + rng.uniform(1.0, 3000.0);
        const double dv = rng.uniform(0.1, 50.0);
        const double pi = rng.uniform(0.0, 0.9);
        const double dpi = rng.uniform(1e-4, 0.1);
        REQUIRE(d_total(p, v + dv, pi) < d_total(p, v, pi));
        REQUIRE(d_total(p, v, pi + dpi) > d_total(p, v, pi));
    }
}

TEST_CASE("psnr fixed points") {
    CHECK_THAT(mse_to_psnr(255.0 * 255.0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(mse_to_psnr(255.0 * 255.0 / 10.0), WithinAbs(10.0, 1e-12));
    CHECK_THAT(mse_to_psnr(1.0), WithinAbs(48.1308, 1e-3));
    CHECK_THROWS_AS(mse_to_psnr(0.0), invalid_parameter);
    CHECK_THROWS_AS(mse_to_psnr(-1.0), invalid_parameter);
}

TEST_CASE("psnr is strictly decreasing and inverts cleanly") {
    RngStream rng(67);
    double prev = mse_to_psnr(1e-6);
    for (double mse = 1e-3; mse < 1e5; mse *= 3.7) {
        const double db = mse_to_psnr(mse);
        REQUIRE(db < prev);
        prev = db;
        REQUIRE_THAT(mse_to_psnr(psnr_to_mse(db)), WithinAbs(db, 1e-9));
    }
    for (int t = 0; t < 100; ++t) {
        const double mse = rng.uniform(0.01, 5000.0);
        REQUIRE_THAT(psnr_to_mse(mse_to_psnr(mse)), WithinAbs(mse, 1e-9 * mse));
    }
}
