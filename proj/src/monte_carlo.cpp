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

#include "fdrelay/monte_carlo.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

namespace fdrelay::sim {

namespace {

constexpr std::uint32_t kMaxAttempts = 64;

struct ChunkResult {
    std::size_t redraws = 0;
    double max_residual = 0.0;
};

ChunkResult run_chunk(const AntennaConfig& config, std::uint64_t seed, std::size_t begin, std::size_t end,
                      std::vector<LinkGains>& out) {
    ChunkResult r;
    LinkBudget unit;
    for (std::size_t trial = begin; trial < end; ++trial) {
        for (std::uint32_t attempt = 0;; ++attempt) {
            if (attempt == kMaxAttempts) throw std::runtime_error("trial " + std::to_string(trial) + ": no usable draw");
            PhiloxStream stream(seed, trial, attempt);
            const ChannelSample sample = sample_channels(stream, config);
            try {
                const BeamformerSet beams = design_beamformers(sample, config.mode);
                const TrialResult t = instantaneous_snrs(sample, beams, unit);
                if (!(t.zf_residual <= kZfResidualLimit)) {
                    throw std::runtime_error("trial " + std::to_string(trial) + ": ZF residual " +
                                             std::to_string(t.zf_residual) + " exceeds limit");
                }
                r.max_residual = std::max(r.max_residual, t.zf_residual);
                out[trial] = LinkGains{t.snr_sr, t.snr_rd};
                break;
            } catch (const DegenerateChannel&) {
                ++r.redraws;
            }
        }
    }
    return r;
}

}  // namespace

GainSample simulate_link_gains(const AntennaConfig& config, std::size_t trials, std::uint64_t seed,
                               unsigned threads) {
    config.validate();
    GainSample result;
    result.config = config;
    result.seed = seed;
    result.gains.resize(trials);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials / 1024, 1)));

    std::vector<ChunkResult> chunks(threads);
    if (threads == 1) {
        chunks[0] = run_chunk(config, seed, 0, trials, result.gains);
    } else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> workers;
        const std::size_t per = (trials + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = std::min(trials, w * per);
            const std::size_t end = std::min(trials, begin + per);
            workers.emplace_back([&, w, begin, end] {
                try {
                    chunks[w] = run_chunk(config, seed, begin, end, result.gains);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        workers.clear();
        if (failure) std::rethrow_exception(failure);
    }

    for (const auto& c : chunks) {
        result.redraws += c.redraws;
        result.max_zf_residual = std::max(result.max_zf_residual, c.max_residual);
    }
    if (trials > 0 && static_cast<double>(result.redraws) > kMaxRedrawFraction * static_cast<double>(trials)) {
        throw std::runtime_error("Monte Carlo run rejected: " + std::to_string(result.redraws) +
                                 " degenerate redraws in " + std::to_string(trials) + " trials");
    }
    return result;
}

OutageEstimate count_outage(const GainSample& sample, double scale_sr, double scale_rd, double gamma_t) {
    if (sample.gains.empty()) throw std::invalid_argument("count_outage: empty sample");
    OutageEstimate e;
    e.trials = sample.gains.size();
    for (const auto& g : sample.gains) {
        if (std::min(scale_sr * g.sr, scale_rd * g.rd) < gamma_t) ++e.outages;
    }
    e.p_hat = static_cast<double>(e.outages) / static_cast<double>(e.trials);
    const auto ci = stats::wilson_interval(e.outages, e.trials);
    e.ci_low = ci.low;
    e.ci_high = ci.high;
    return e;
}

OutageEstimate estimate_outage(const AntennaConfig& config, const LinkBudget& budget,
                               const outage::OutageQuery& query, std::size_t trials, std::uint64_t seed,
                               unsigned threads) {
    if (trials == 0) throw std::invalid_argument("estimate_outage: trials must be >= 1");
    budget.validate();
    const double gamma_t = outage::snr_threshold(query);
    const GainSample sample = simulate_link_gains(config, trials, seed, threads);
    return count_outage(sample, budget.scale_sr(), budget.scale_rd(), gamma_t);
}

}  // namespace fdrelay::sim
