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

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) and a
// substream wrapper.  Every Monte Carlo trial draws from its own substream
// keyed by (seed, trial index, attempt), so results do not depend on how
// trials are distributed over threads.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace fdrelay::sim {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr int kRounds = 10;

    static constexpr Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < kRounds; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// Sequential draws from one substream. Counter word 0 walks the blocks,
/// word 1 holds the tag, words 2-3 the 64-bit substream id.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t substream, std::uint32_t tag = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, tag, static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32)} {}

    /// Next 128 random bits.
    Philox4x32::Counter next_block() {
        const auto out = Philox4x32::generate(ctr_, key_);
        ++ctr_[0];
        return out;
    }

    /// Uniform on (0, 1) with 53-bit resolution; never returns 0 or 1.
    double uniform() {
        if (cursor_ == 2) {
            block_ = next_block();
            cursor_ = 0;
        }
        const std::uint64_t bits =
            (std::uint64_t{block_[2 * cursor_]} << 32 | block_[2 * cursor_ + 1]) >> 11;
        ++cursor_;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Circularly-symmetric complex Gaussian, E|z|^2 = 1 (Box-Muller; the
    /// real and imaginary parts are the two independent normals of one pair).
    std::complex<double> complex_normal() {
        const double radius = std::sqrt(-std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter block_{};
    int cursor_ = 2;
};

}  // namespace fdrelay::sim
