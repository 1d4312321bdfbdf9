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

#include "fdrelay/exp_poly.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fdrelay::algebra {

namespace {

TermKey make_key(long k, long l) {
    if (k < 0 || l < 0) {
        throw std::invalid_argument("ExpPoly term with negative index (k=" + std::to_string(k) +
                                    ", l=" + std::to_string(l) + ")");
    }
    return TermKey{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(l)};
}

}  // namespace

ExpPoly ExpPoly::constant(const Rational& c) { return monomial(0, 0, c); }

ExpPoly ExpPoly::monomial(long k, long l, const Rational& c) {
    ExpPoly p;
    p.accumulate(make_key(k, l), c);
    return p;
}

ExpPoly ExpPoly::from_terms(std::initializer_list<Triple> terms) {
    ExpPoly p;
    for (const auto& t : terms) p.accumulate(make_key(t.k, t.l), t.coeff);
    return p;
}

Rational ExpPoly::coefficient(long k, long l) const {
    if (k < 0 || l < 0) return Rational(0);
    const auto it = terms_.find(make_key(k, l));
    return it == terms_.end() ? Rational(0) : it->second;
}

const ExpPoly::Terms::value_type& ExpPoly::dominant_term() const {
    if (terms_.empty()) throw std::logic_error("dominant_term of the zero ExpPoly");
    return *terms_.begin();
}

void ExpPoly::accumulate(const TermKey& key, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(key, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& rhs) {
    for (const auto& [key, c] : rhs.terms_) accumulate(key, c);
    return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& rhs) {
    for (const auto& [key, c] : rhs.terms_) accumulate(key, -c);
    return *this;
}

ExpPoly& ExpPoly::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, c] : terms_) c *= scalar;
    return *this;
}

ExpPoly operator*(const ExpPoly& lhs, const ExpPoly& rhs) {
    ExpPoly out;
    Rational product;
    for (const auto& [ka, ca] : lhs.terms_) {
        for (const auto& [kb, cb] : rhs.terms_) {
            product = ca * cb;
            out.accumulate(TermKey{ka.k + kb.k, ka.l + kb.l}, product);
        }
    }
    return out;
}

ExpPoly operator-(ExpPoly p) {
    for (auto& [key, c] : p.terms_) c = -c;
    return p;
}

long double ExpPoly::evaluate(long double lambda) const {
    // The coefficients alternate in sign and near lambda = 0 the terms cancel
    // to many digits (gamma(s, x) ~ x^s / s), so accumulate at 50 digits.
    using Wide = boost::multiprecision::mpf_float_50;
    const Wide x(lambda);
    Wide sum = 0;
    for (const auto& [key, c] : terms_) {
        Wide term(c.get_mpq_t());
        if (key.l > 0) term *= boost::multiprecision::pow(x, key.l);
        if (key.k > 0) term *= boost::multiprecision::exp(-x * key.k);
        sum += term;
    }
    return sum.convert_to<long double>();
}

std::string ExpPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        Rational mag = abs(c);
        if (first) {
            if (c < 0) os << '-';
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        os << algebra::to_string(mag);
        if (key.l == 1) os << "*l";
        if (key.l > 1) os << "*l^" << key.l;
        if (key.k > 0) os << "*e^{-" << key.k << "l}";
    }
    return os.str();
}

ExpPoly add(const ExpPoly& p, const ExpPoly& q) { return p + q; }

ExpPoly mul(const ExpPoly& p, const ExpPoly& q) { return p * q; }

ExpPoly differentiate(const ExpPoly& p) {
    ExpPoly out;
    for (const auto& [key, c] : p.terms()) {
        if (key.l > 0) out += ExpPoly::monomial(key.k, key.l - 1, c * key.l);
        if (key.k > 0) out += ExpPoly::monomial(key.k, key.l, -c * key.k);
    }
    return out;
}

Rational leading_coefficient(const ExpPoly& p, long k, long l) { return p.coefficient(k, l); }

ExpPolyMatrix::ExpPolyMatrix(std::size_t n) : n_(n), data_(n * n) {
    if (n == 0) throw std::invalid_argument("ExpPolyMatrix dimension must be >= 1");
}

ExpPolyMatrix::ExpPolyMatrix(std::initializer_list<std::initializer_list<ExpPoly>> rows)
    : ExpPolyMatrix(rows.size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != n_) {
            throw std::invalid_argument("ExpPolyMatrix: row " + std::to_string(r) + " has " +
                                        std::to_string(row.size()) + " entries, expected " + std::to_string(n_));
        }
        std::size_t c = 0;
        for (const auto& entry : row) (*this)(r, c++) = entry;
        ++r;
    }
}

ExpPoly determinant(const ExpPolyMatrix& m) {
    const std::size_t n = m.dim();
    if (n > 20) throw std::invalid_argument("determinant: dimension too large for subset expansion");

    // minors[S] = determinant of rows [0, popcount(S)) restricted to column set S.
    const std::size_t full = (std::size_t{1} << n) - 1;
    std::vector<ExpPoly> minors(full + 1);
    minors[0] = ExpPoly::constant(1);

    for (std::size_t subset = 1; subset <= full; ++subset) {
        const auto row = static_cast<std::size_t>(std::popcount(subset)) - 1;
        ExpPoly acc;
        std::size_t position = 0;
        for (std::size_t col = 0; col < n; ++col) {
            if (!(subset & (std::size_t{1} << col))) continue;
            const ExpPoly& entry = m(row, col);
            const ExpPoly& minor = minors[subset & ~(std::size_t{1} << col)];
            if (!entry.is_zero() && !minor.is_zero()) {
                if ((row + position) % 2 == 0) {
                    acc += entry * minor;
                } else {
                    acc -= entry * minor;
                }
            }
            ++position;
        }
        minors[subset] = std::move(acc);
    }
    return minors[full];
}

}  // namespace fdrelay::algebra
