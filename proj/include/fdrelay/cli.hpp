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

#include "fdrelay/coeff_cache.hpp"
#include "fdrelay/monte_carlo.hpp"
#include "fdrelay/outage.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdrelay::cli {

/// Stable process exit codes.
enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kUsageError = 2 };

/// Environment variable naming the default coefficient cache directory.
inline constexpr const char* kCacheDirEnv = "FDRELAY_CACHE_DIR";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Asymmetry {
    enum class Kind { Symmetric, SrDominant, RdDominant };
    Kind kind = Kind::Symmetric;
    double ratio = 1.0;  ///< P'_dominant : P'_other, > 1 when asymmetric
};

/// Parsed run configuration. All stored values are linear.
struct RunConfig {
    outage::AntennaConfig antennas;
    double p_s = 1.0;
    double p_r = 1.0;
    double alpha_sr = 1.0;
    double alpha_rd = 1.0;
    Asymmetry asymmetry;
    outage::OutageQuery query = outage::SnrThreshold{10.0};
    std::vector<double> grid_db;  ///< average SNR grid, dB, strictly increasing
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> out_csv;

    /// Both hops at average SNR 10^(gammabar_db/10).
    [[nodiscard]] outage::LinkBudget budget_at(double gammabar_db) const;
};

/// Flat "key = value" text; '#' or ';' start a comment. Keys:
///   n_s n_r1 n_r2 n_d mode  gamma_t_db | gamma_t | rate_r0
///   p_s_db p_r_db alpha_sr alpha_rd asymmetry power_ratio
///   grid_start_db grid_stop_db grid_step_db trials seed out_csv
/// Throws ConfigError.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

double db_to_linear(double db);

/// Named fault injections for negative-control runs.
enum class Fault { None, DimsMapping };
Fault parse_fault(const std::string& name);

/// Wishart dimensions the analytic side uses, optionally with the
/// projection dropped (the DimsMapping fault).
wishart::WishartDims analytic_link_dims(const outage::AntennaConfig& config, outage::Link link, Fault fault);

struct CurveRow {
    double gammabar_db = 0.0;
    double analytic = 0.0;
    std::optional<sim::OutageEstimate> mc;
};

/// Analytic outage on the grid plus, when trials > 0, a Monte Carlo estimate
/// per point. The channel draws are shared by all grid points, so each row's
/// estimate equals estimate_outage(..., trials, seed) at that point.
std::vector<CurveRow> compute_curve(const RunConfig& config, wishart::CoeffStore& store, Fault fault = Fault::None,
                                    unsigned threads = 0);

/// Header "gammabar_db,analytic,mc,ci_low,ci_high", 10 significant digits,
/// empty MC fields when no simulation ran.
std::string format_csv(const std::vector<CurveRow>& rows);

/// (p_hat - p) / sqrt(p (1 - p) / n); 0 when both are degenerate.
double z_score(double analytic, const sim::OutageEstimate& mc);

/// Expected outage (or non-outage) count below which the normal
/// approximation behind the z-score is not trusted.
inline constexpr double kMinExpectedCount = 10.0;

/// Points closer than this to the top of the grid enter the slope fit.
inline constexpr double kSlopeWindowDb = 10.0;
inline constexpr double kSlopeTolerance = 0.3;

struct SlopeFit {
    double fitted = 0.0;
    int predicted_order = 0;
    std::size_t points = 0;
    [[nodiscard]] bool pass() const;
};

/// Fits log10(outage) against gammabar_db / 10 over the top grid decade.
SlopeFit fit_diversity_slope(const std::vector<CurveRow>& rows, int predicted_order);

/// Entry point shared by the fdrelay executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fdrelay::cli
