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

#include "fdrelay/wishart.hpp"

#include <algorithm>
#include <utility>

namespace fdrelay::wishart {

using algebra::ExpPolyMatrix;
using algebra::factorial;
using algebra::Integer;

WishartDims::WishartDims(int a, int b) : a_(a), b_(b) {
    if (a < 1 || b < a) {
        throw std::invalid_argument("invalid Wishart dimensions (a=" + std::to_string(a) + ", b=" +
                                    std::to_string(b) + "): need 1 <= a <= b");
    }
}

WishartDims WishartDims::from_shape(int rows, int cols) {
    return WishartDims(std::min(rows, cols), std::max(rows, cols));
}

std::string to_string(const WishartDims& dims) {
    return "(" + std::to_string(dims.a()) + "," + std::to_string(dims.b()) + ")";
}

Rational k_ab(const WishartDims& dims) {
    Integer denom = 1;
    for (int i = 1; i <= dims.a(); ++i) {
        denom *= factorial(static_cast<unsigned>(dims.a() - i));
        denom *= factorial(static_cast<unsigned>(dims.b() - i));
    }
    return algebra::ratio(Integer(1), denom);
}

ExpPoly lower_gamma_entry(int s) {
    if (s < 1) throw std::invalid_argument("lower_gamma_entry: shape must be >= 1, got " + std::to_string(s));
    const Integer scale = factorial(static_cast<unsigned>(s - 1));
    ExpPoly p = ExpPoly::constant(Rational(scale));
    for (int j = 0; j < s; ++j) {
        p -= ExpPoly::monomial(1, j, algebra::ratio(scale, factorial(static_cast<unsigned>(j))));
    }
    return p;
}

namespace {

ExpPoly hankel_determinant(const WishartDims& dims) {
    const auto a = static_cast<std::size_t>(dims.a());
    ExpPolyMatrix g(a);
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < a; ++j) {
            // 1-based (i, j) -> shape b - a + i + j - 1
            g(i, j) = lower_gamma_entry(dims.b() - dims.a() + static_cast<int>(i + j) + 1);
        }
    }
    return algebra::determinant(g);
}

}  // namespace

ExpPoly max_eig_cdf(const WishartDims& dims) { return k_ab(dims) * hankel_determinant(dims); }

ExpPoly max_eig_density(const WishartDims& dims) {
    return k_ab(dims) * algebra::differentiate(hankel_determinant(dims));
}

CoeffTable::CoeffTable(WishartDims dims, Rational k_ab, std::vector<CoeffEntry> entries, std::string provenance)
    : dims_(dims), k_ab_(std::move(k_ab)), entries_(std::move(entries)), provenance_(std::move(provenance)) {
    std::size_t expected = 0;
    for (int n = 1; n <= dims_.a(); ++n) {
        for (int m = dims_.max_degree(n); m >= dims_.min_degree(); --m) {
            if (expected >= entries_.size() || entries_[expected].n != n || entries_[expected].m != m) {
                throw std::invalid_argument("CoeffTable" + to_string(dims_) + ": entry " + std::to_string(expected) +
                                            " does not match index (" + std::to_string(n) + "," +
                                            std::to_string(m) + ")");
            }
            ++expected;
        }
    }
    if (expected != entries_.size()) {
        throw std::invalid_argument("CoeffTable" + to_string(dims_) + ": " + std::to_string(entries_.size()) +
                                    " entries, expected " + std::to_string(expected));
    }
    for (auto& e : entries_) e.d_approx = algebra::to_long_double(e.d);

    // P(m+1, n u) = sum_{i>=0} (-1)^i (n u)^{m+1+i} / (m! i! (m+1+i)). With
    // n u <= a/2 the terms past i = 80 are far below long double resolution.
    constexpr int kTailTerms = 80;
    int top = 0;
    for (const auto& e : entries_) top = std::max(top, e.m + 1 + kTailTerms);
    std::vector<Rational> series(static_cast<std::size_t>(top) + 1);
    for (const auto& e : entries_) {
        if (e.d == 0) continue;
        const Rational base = e.d / Rational(factorial(static_cast<unsigned>(e.m)));
        Integer rate_power;
        mpz_ui_pow_ui(rate_power.get_mpz_t(), static_cast<unsigned long>(e.n), static_cast<unsigned long>(e.m + 1));
        Integer i_factorial = 1;
        for (int i = 0; i <= kTailTerms; ++i) {
            if (i > 0) {
                rate_power *= e.n;
                i_factorial *= i;
            }
            const int j = e.m + 1 + i;
            Rational term = base * algebra::ratio(rate_power, i_factorial * j);
            if (i % 2 == 1) term = -term;
            series[static_cast<std::size_t>(j)] += term;
        }
    }
    cdf_series_.reserve(series.size());
    for (const auto& c : series) cdf_series_.push_back(algebra::to_long_double(c));
}

Rational CoeffTable::coefficient(int n, int m) const {
    for (const auto& e : entries_) {
        if (e.n == n && e.m == m) return e.d;
    }
    return Rational(0);
}

Rational CoeffTable::sum() const {
    Rational total = 0;
    for (const auto& e : entries_) total += e.d;
    return total;
}

ExpPoly CoeffTable::density() const {
    ExpPoly p;
    for (const auto& e : entries_) {
        Integer rate_power;
        mpz_ui_pow_ui(rate_power.get_mpz_t(), static_cast<unsigned long>(e.n), static_cast<unsigned long>(e.m + 1));
        const Rational c = e.d * algebra::ratio(rate_power, factorial(static_cast<unsigned>(e.m)));
        p += ExpPoly::monomial(e.n, e.m, c);
    }
    return p;
}

ExpPoly CoeffTable::cdf() const {
    // gamma(m+1, n lambda)/m! = 1 - e^{-n lambda} sum_{j<=m} (n lambda)^j / j!
    ExpPoly p;
    for (const auto& e : entries_) {
        if (e.d == 0) continue;
        p += ExpPoly::constant(e.d);
        for (int j = 0; j <= e.m; ++j) {
            Integer rate_power;
            mpz_ui_pow_ui(rate_power.get_mpz_t(), static_cast<unsigned long>(e.n), static_cast<unsigned long>(j));
            p -= ExpPoly::monomial(e.n, j, e.d * algebra::ratio(rate_power, factorial(static_cast<unsigned>(j))));
        }
    }
    return p;
}

bool operator==(const CoeffTable& lhs, const CoeffTable& rhs) {
    if (!(lhs.dims_ == rhs.dims_) || lhs.k_ab_ != rhs.k_ab_ || lhs.entries_.size() != rhs.entries_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < lhs.entries_.size(); ++i) {
        const auto& x = lhs.entries_[i];
        const auto& y = rhs.entries_[i];
        if (x.n != y.n || x.m != y.m || x.d != y.d) return false;
    }
    return true;
}

CoeffTable extract_coefficients(const WishartDims& dims) {
    const Rational k = k_ab(dims);
    ExpPoly residual = algebra::differentiate(hankel_determinant(dims));

    std::vector<CoeffEntry> entries;
    for (int n = 1; n <= dims.a(); ++n) {
        for (int m = dims.max_degree(n); m >= dims.min_degree(); --m) {
            // The peeled term must dominate what is left; otherwise the
            // lambda -> infinity limit in the reference algorithm diverges.
            if (!residual.is_zero()) {
                const auto& [key, c] = residual.dominant_term();
                const algebra::TermKey here{static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m)};
                if (algebra::DominanceOrder{}(key, here)) {
                    throw NonzeroResidual("coefficient extraction for " + to_string(dims) +
                                          ": residual term (" + std::to_string(key.k) + "," +
                                          std::to_string(key.l) + ") dominates index (" + std::to_string(n) + "," +
                                          std::to_string(m) + ")");
                }
            }
            const Rational a_nm = algebra::leading_coefficient(residual, n, m);
            Integer rate_power;
            mpz_ui_pow_ui(rate_power.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m + 1));
            entries.push_back(
                CoeffEntry{n, m, a_nm * k * algebra::ratio(factorial(static_cast<unsigned>(m)), rate_power), 0.0L});
            residual -= ExpPoly::monomial(n, m, a_nm);
        }
    }
    if (!residual.is_zero()) {
        throw NonzeroResidual("coefficient extraction for " + to_string(dims) +
                              " left a nonzero residual: " + residual.to_string());
    }
    return CoeffTable(dims, k, std::move(entries));
}

}  // namespace fdrelay::wishart
