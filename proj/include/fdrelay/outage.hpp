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

// Closed-form outage of a full-duplex decode-and-forward MIMO relay with
// zero-forcing self-interference suppression at the relay.
//
// Each hop's SNR is  scale * lambda_max(W)  for a complex Wishart W whose
// dimensions depend on the antenna configuration and on which side of the
// relay carries the ZF null (see link_dims).  All quantities here are
// linear; dB conversions belong to the caller.

#pragma once

#include "fdrelay/coeff_cache.hpp"
#include "fdrelay/wishart.hpp"

#include <stdexcept>
#include <string>
#include <variant>

namespace fdrelay::outage {

using wishart::CoeffTable;
using wishart::WishartDims;

enum class ZfMode { Receive, Transmit };

std::string to_string(ZfMode mode);
ZfMode parse_zf_mode(const std::string& text);

enum class Link { SourceRelay, RelayDestination };

/// (N_S, N_R1, N_R2, N_D) and the ZF side. N_R1 counts relay receive
/// antennas, N_R2 relay transmit antennas.
struct AntennaConfig {
    int n_s = 1;
    int n_r1 = 1;
    int n_r2 = 1;
    int n_d = 1;
    ZfMode mode = ZfMode::Receive;

    /// Throws std::invalid_argument on non-positive counts, or when the
    /// projected side has fewer than two antennas.
    void validate() const;

    friend bool operator==(const AntennaConfig&, const AntennaConfig&) = default;
};

std::string to_string(const AntennaConfig& config);

/// Noise-normalized powers, average link SNRs and path-loss amplitudes.
/// Only the products alpha^2 * P * gammabar reach the statistics.
struct LinkBudget {
    double p_s = 1.0;
    double p_r = 1.0;
    double gammabar_sr = 1.0;
    double gammabar_rd = 1.0;
    double alpha_sr = 1.0;
    double alpha_rd = 1.0;

    void validate() const;

    [[nodiscard]] double effective_source_power() const noexcept { return alpha_sr * alpha_sr * p_s; }
    [[nodiscard]] double effective_relay_power() const noexcept { return alpha_rd * alpha_rd * p_r; }
    [[nodiscard]] double scale_sr() const noexcept { return effective_source_power() * gammabar_sr; }
    [[nodiscard]] double scale_rd() const noexcept { return effective_relay_power() * gammabar_rd; }

    /// Unit path loss and both average SNRs set to gammabar.
    static LinkBudget symmetric(double gammabar);
};

struct SnrThreshold {
    double gamma_t = 0.0;  ///< linear
};
struct RateThreshold {
    double r0 = 0.0;  ///< bits/s/Hz
};
using OutageQuery = std::variant<SnrThreshold, RateThreshold>;

/// 2^r0 - 1.
double rate_to_snr_threshold(double r0);

/// Linear SNR threshold of either query kind; throws on negative values.
double snr_threshold(const OutageQuery& query);

/// Receive ZF: SR -> (N_R1 - 1) x N_S, RD -> N_R2 x N_D.
/// Transmit ZF: SR -> N_R1 x N_S, RD -> (N_R2 - 1) x N_D.
WishartDims link_dims(const AntennaConfig& config, Link link);

/// Receive ZF: min(N_S (N_R1 - 1), N_R2 N_D); transmit ZF: min(N_D (N_R2 - 1), N_S N_R1).
int diversity_order(const AntennaConfig& config);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / (s-1)!.
double regularized_lower_gamma(int s, double x);

/// Probability outside [0,1] by more than this is an error, not roundoff.
inline constexpr double kProbabilityTolerance = 1e-12;

class ProbabilityRangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Pr[scale * lambda_max < gamma_t] = sum D_{n,m} P(m+1, n gamma_t / scale).
double link_outage(const CoeffTable& table, double scale, double gamma_t);

/// Density of scale * lambda_max at x.
double pdf_gamma_link(const CoeffTable& table, double scale, double x);

/// 1 - (1 - p_sr)(1 - p_rd), written as p_sr + (1 - p_sr) p_rd.
double e2e_outage(double p_sr, double p_rd);

/// Both hops from explicit tables and scales.
double outage_e2e_from_tables(const CoeffTable& sr, const CoeffTable& rd, double scale_sr, double scale_rd,
                              double gamma_t);

double outage_e2e_closed_form(const AntennaConfig& config, const LinkBudget& budget, const OutageQuery& query,
                              wishart::CoeffStore& store);

}  // namespace fdrelay::outage
