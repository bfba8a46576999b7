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
#ifndef PAJSCC_PAJSCC_HPP
#define PAJSCC_PAJSCC_HPP

#include "pajscc/allocator.hpp"
#include "pajscc/channel.hpp"
#include "pajscc/distortion.hpp"
#include "pajscc/errors.hpp"
#include "pajscc/estimator.hpp"
#include "pajscc/fec.hpp"
#include "pajscc/gf256.hpp"
#include "pajscc/gop.hpp"
#include "pajscc/rng.hpp"
#include "pajscc/runner.hpp"
#include "pajscc/scenario_json.hpp"
#include "pajscc/sim.hpp"

#endif // PAJSCC_PAJSCC_HPP
