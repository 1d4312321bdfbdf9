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

#include "fdrelay/outage.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace fdrelay::outage {

namespace {

// The D coefficients alternate in sign and the sums below cancel by many
// orders of magnitude at high SNR, so they run at 100 significant digits.
using Wide = boost::multiprecision::mpf_float_100;

// sum_j c_j u^j by Horner, for u inside the series radius.
long double series_value(const std::vector<long double>& c, long double u) {
    long double acc = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
}

long double series_derivative(const std::vector<long double>& c, long double u) {
    long double acc = 0.0L;
    for (std::size_t j = c.size() - 1; j >= 1; --j) acc = acc * u + static_cast<long double>(j) * c[j];
    return acc;
}

// sum_{n,m} D_{n,m} P(m+1, n u), with P(s, y) = 1 - e^{-y} sum_{j<s} y^j/j!.
long double cdf_wide(const CoeffTable& table, long double u) {
    Wide total = 0;
    const int a = table.dims().a();
    for (int n = 1; n <= a; ++n) {
        const Wide y = Wide(u) * n;
        const Wide decay = boost::multiprecision::exp(-y);
        std::vector<Wide> partial(static_cast<std::size_t>(table.dims().max_degree(n)) + 1);
        Wide power = 1;
        Wide acc = 0;
        for (std::size_t j = 0; j < partial.size(); ++j) {
            if (j > 0) power *= y / static_cast<unsigned>(j);
            acc += power;
            partial[j] = acc;
        }
        for (const auto& e : table.entries()) {
            if (e.n != n || e.d == 0) continue;
            total += Wide(e.d.get_mpq_t()) * (1 - decay * partial[static_cast<std::size_t>(e.m)]);
        }
    }
    return total.convert_to<long double>();
}

// sum_{n,m} D_{n,m}/m! n^{m+1} u^m e^{-n u}.
long double density_wide(const CoeffTable& table, long double u) {
    Wide total = 0;
    const Wide x(u);
    for (const auto& e : table.entries()) {
        if (e.d == 0) continue;
        const Wide rate(e.n);
        Wide term = Wide(e.d.get_mpq_t()) * rate * boost::multiprecision::exp(-rate * x);
        for (int j = 1; j <= e.m; ++j) term *= rate * x / j;
        total += term;
    }
    return total.convert_to<long double>();
}

long double regularized_lower_gamma_ld(int s, long double x) {
    if (x <= 0.0L) return 0.0L;
    if (std::isinf(x)) return 1.0L;
    return boost::math::gamma_p(static_cast<long double>(s), x);
}

double checked_probability(long double p, const char* what) {
    if (std::isnan(p) || p < -kProbabilityTolerance || p > 1.0L + kProbabilityTolerance) {
        throw ProbabilityRangeError(std::string(what) + ": value " + std::to_string(static_cast<double>(p)) +
                                    " is outside [0, 1]");
    }
    return static_cast<double>(std::clamp(p, 0.0L, 1.0L));
}

}  // namespace

std::string to_string(ZfMode mode) { return mode == ZfMode::Receive ? "receive" : "transmit"; }

ZfMode parse_zf_mode(const std::string& text) {
    if (text == "receive" || text == "rx" || text == "receive_zf") return ZfMode::Receive;
    if (text == "transmit" || text == "tx" || text == "transmit_zf") return ZfMode::Transmit;
    throw std::invalid_argument("unknown ZF mode '" + text + "' (expected receive or transmit)");
}

void AntennaConfig::validate() const {
    if (n_s < 1 || n_r1 < 1 || n_r2 < 1 || n_d < 1) {
        throw std::invalid_argument("antenna counts must be positive: " + outage::to_string(*this));
    }
    if (mode == ZfMode::Receive && n_r1 < 2) {
        throw std::invalid_argument("receive ZF needs N_R1 >= 2: " + outage::to_string(*this));
    }
    if (mode == ZfMode::Transmit && n_r2 < 2) {
        throw std::invalid_argument("transmit ZF needs N_R2 >= 2: " + outage::to_string(*this));
    }
}

std::string to_string(const AntennaConfig& config) {
    return "(" + std::to_string(config.n_s) + "," + std::to_string(config.n_r1) + "," + std::to_string(config.n_r2) +
           "," + std::to_string(config.n_d) + ") " + to_string(config.mode) + " ZF";
}

void LinkBudget::validate() const {
    const double fields[] = {p_s, p_r, gammabar_sr, gammabar_rd, alpha_sr, alpha_rd};
    for (double f : fields) {
        if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("link budget fields must be positive");
    }
}

LinkBudget LinkBudget::symmetric(double gammabar) {
    LinkBudget b;
    b.gammabar_sr = gammabar;
    b.gammabar_rd = gammabar;
    return b;
}

double rate_to_snr_threshold(double r0) {
    if (!(r0 >= 0.0)) throw std::invalid_argument("rate threshold must be >= 0");
    return std::exp2(r0) - 1.0;
}

double snr_threshold(const OutageQuery& query) {
    if (const auto* snr = std::get_if<SnrThreshold>(&query)) {
        if (!(snr->gamma_t >= 0.0)) throw std::invalid_argument("SNR threshold must be >= 0");
        return snr->gamma_t;
    }
    return rate_to_snr_threshold(std::get<RateThreshold>(query).r0);
}

WishartDims link_dims(const AntennaConfig& config, Link link) {
    config.validate();
    const bool receive = config.mode == ZfMode::Receive;
    if (link == Link::SourceRelay) {
        return WishartDims::from_shape(receive ? config.n_r1 - 1 : config.n_r1, config.n_s);
    }
    return WishartDims::from_shape(receive ? config.n_r2 : config.n_r2 - 1, config.n_d);
}

int diversity_order(const AntennaConfig& config) {
    config.validate();
    if (config.mode == ZfMode::Receive) return std::min(config.n_s * (config.n_r1 - 1), config.n_r2 * config.n_d);
    return std::min(config.n_d * (config.n_r2 - 1), config.n_s * config.n_r1);
}

double regularized_lower_gamma(int s, double x) {
    if (s < 1) throw std::invalid_argument("regularized_lower_gamma: s must be >= 1");
    if (std::isnan(x) || x < 0.0) throw std::invalid_argument("regularized_lower_gamma: x must be >= 0");
    return static_cast<double>(regularized_lower_gamma_ld(s, x));
}

double link_outage(const CoeffTable& table, double scale, double gamma_t) {
    if (!(scale > 0.0)) throw std::invalid_argument("link_outage: scale must be positive");
    if (std::isnan(gamma_t) || gamma_t < 0.0) throw std::invalid_argument("link_outage: gamma_t must be >= 0");
    if (gamma_t == 0.0) return 0.0;
    const long double u = static_cast<long double>(gamma_t) / scale;
    if (std::isinf(u)) return checked_probability(static_cast<long double>(table.sum().get_d()), "link_outage");
    const long double p = u <= CoeffTable::kSeriesRadius ? series_value(table.cdf_series(), u) : cdf_wide(table, u);
    return checked_probability(p, "link_outage");
}

double pdf_gamma_link(const CoeffTable& table, double scale, double x) {
    if (!(scale > 0.0)) throw std::invalid_argument("pdf_gamma_link: scale must be positive");
    if (std::isnan(x) || x < 0.0) throw std::invalid_argument("pdf_gamma_link: x must be >= 0");
    const long double u = static_cast<long double>(x) / scale;
    if (std::isinf(u)) return 0.0;
    const long double f =
        u <= CoeffTable::kSeriesRadius ? series_derivative(table.cdf_series(), u) : density_wide(table, u);
    return static_cast<double>(f / scale);
}

double e2e_outage(double p_sr, double p_rd) {
    if (!(p_sr >= 0.0 && p_sr <= 1.0 && p_rd >= 0.0 && p_rd <= 1.0)) {
        throw std::invalid_argument("e2e_outage: inputs must be probabilities");
    }
    // Ordered so that the result is bitwise symmetric in its arguments.
    const double lo = std::min(p_sr, p_rd);
    const double hi = std::max(p_sr, p_rd);
    return hi + (1.0 - hi) * lo;
}

double outage_e2e_from_tables(const CoeffTable& sr, const CoeffTable& rd, double scale_sr, double scale_rd,
                              double gamma_t) {
    return e2e_outage(link_outage(sr, scale_sr, gamma_t), link_outage(rd, scale_rd, gamma_t));
}

double outage_e2e_closed_form(const AntennaConfig& config, const LinkBudget& budget, const OutageQuery& query,
                              wishart::CoeffStore& store) {
    config.validate();
    budget.validate();
    const double gamma_t = snr_threshold(query);
    const auto sr = store.get(link_dims(config, Link::SourceRelay));
    const auto rd = store.get(link_dims(config, Link::RelayDestination));
    return outage_e2e_from_tables(*sr, *rd, budget.scale_sr(), budget.scale_rd(), gamma_t);
}

}  // namespace fdrelay::outage
