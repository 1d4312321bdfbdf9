// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "fdrelay/channel.hpp"
#include "fdrelay/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fdrelay::sim {

/// Unit-scale hop gains of one trial; the hop SNR is scale * gain.
struct LinkGains {
    double sr = 0.0;
    double rd = 0.0;
};

/// Gains of `trials` independent channel draws, in trial order.
struct GainSample {
    AntennaConfig config;
    std::uint64_t seed = 0;
    std::vector<LinkGains> gains;
    std::size_t redraws = 0;        ///< degenerate draws that were replaced
    double max_zf_residual = 0.0;   ///< worst |W_R^H H_RR W_T| seen
};

/// Hard ceiling on the ZF null of an accepted trial.
inline constexpr double kZfResidualLimit = 1e-10;

/// Fraction of redrawn trials above which a run is rejected.
inline constexpr double kMaxRedrawFraction = 1e-5;

/// Runs the trials on `threads` workers (0 = hardware concurrency). Trial i
/// only ever reads substream (seed, i), so the result does not depend on the
/// thread count. Throws std::runtime_error when a ZF null exceeds
/// kZfResidualLimit or too many trials are degenerate.
GainSample simulate_link_gains(const AntennaConfig& config, std::size_t trials, std::uint64_t seed,
                               unsigned threads = 0);

struct OutageEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;   ///< 95% Wilson
    double ci_high = 0.0;
    std::size_t outages = 0;
    std::size_t trials = 0;
};

/// A trial is in outage iff min(scale_sr g_sr, scale_rd g_rd) < gamma_t.
OutageEstimate count_outage(const GainSample& sample, double scale_sr, double scale_rd, double gamma_t);

OutageEstimate estimate_outage(const AntennaConfig& config, const LinkBudget& budget,
                               const outage::OutageQuery& query, std::size_t trials, std::uint64_t seed,
                               unsigned threads = 0);

}  // namespace fdrelay::sim
