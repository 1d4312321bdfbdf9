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

#include "fdrelay/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

namespace fdrelay::algebra {

/// Key of a single term lambda^l * exp(-k * lambda).
struct TermKey {
    std::uint32_t k = 0;  ///< exponential index
    std::uint32_t l = 0;  ///< polynomial degree

    friend bool operator==(const TermKey&, const TermKey&) = default;
};

/// Dominance order as lambda -> infinity: slower decay (smaller k) first,
/// then higher polynomial degree first.
struct DominanceOrder {
    bool operator()(const TermKey& lhs, const TermKey& rhs) const {
        if (lhs.k != rhs.k) return lhs.k < rhs.k;
        return lhs.l > rhs.l;
    }
};

/// Exponential polynomial  sum_{k,l} a_{k,l} lambda^l e^{-k lambda}  with
/// exact rational coefficients.
///
/// The representation is canonical: keys are unique, zero coefficients are
/// never stored and iteration follows DominanceOrder. Two ExpPoly values are
/// equal iff they denote the same function.
class ExpPoly {
public:
    using Terms = std::map<TermKey, Rational, DominanceOrder>;

    ExpPoly() = default;

    /// The constant function c.
    static ExpPoly constant(const Rational& c);

    /// c * lambda^l * e^{-k lambda}. Negative k or l is a construction error
    /// (std::invalid_argument).
    static ExpPoly monomial(long k, long l, const Rational& c);

    /// Builds from (k, l, coeff) triples; duplicate keys are summed.
    struct Triple {
        long k;
        long l;
        Rational coeff;
    };
    static ExpPoly from_terms(std::initializer_list<Triple> terms);

    [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    /// Coefficient stored at (k, l), zero when absent.
    [[nodiscard]] Rational coefficient(long k, long l) const;

    /// Most slowly decaying term; precondition: !is_zero().
    [[nodiscard]] const Terms::value_type& dominant_term() const;

    ExpPoly& operator+=(const ExpPoly& rhs);
    ExpPoly& operator-=(const ExpPoly& rhs);
    ExpPoly& operator*=(const Rational& scalar);

    friend ExpPoly operator+(ExpPoly lhs, const ExpPoly& rhs) { return lhs += rhs; }
    friend ExpPoly operator-(ExpPoly lhs, const ExpPoly& rhs) { return lhs -= rhs; }
    friend ExpPoly operator*(const ExpPoly& lhs, const ExpPoly& rhs);
    friend ExpPoly operator*(ExpPoly lhs, const Rational& rhs) { return lhs *= rhs; }
    friend ExpPoly operator*(const Rational& lhs, ExpPoly rhs) { return rhs *= lhs; }
    friend ExpPoly operator-(ExpPoly p);

    friend bool operator==(const ExpPoly& lhs, const ExpPoly& rhs) { return lhs.terms_ == rhs.terms_; }

    /// Floating-point evaluation with compensated summation.
    [[nodiscard]] long double evaluate(long double lambda) const;

    /// Human-readable form, e.g. "2*l^2*e^{-1l} - 1*e^{-2l}".
    [[nodiscard]] std::string to_string() const;

private:
    void accumulate(const TermKey& key, const Rational& coeff);

    Terms terms_;
};

ExpPoly add(const ExpPoly& p, const ExpPoly& q);
ExpPoly mul(const ExpPoly& p, const ExpPoly& q);

/// d/dlambda, term by term:  a l lambda^{l-1} e^{-k lambda} - a k lambda^l e^{-k lambda}.
ExpPoly differentiate(const ExpPoly& p);

/// Stored coefficient a_{k,l}. When (k, l) is visited in DominanceOrder while
/// the visited terms are peeled off, this equals the limit of
/// p / (lambda^l e^{-k lambda}) as lambda -> infinity.
Rational leading_coefficient(const ExpPoly& p, long k, long l);

/// Dense square matrix over the ExpPoly ring.
class ExpPolyMatrix {
public:
    /// n x n zero matrix; n >= 1.
    explicit ExpPolyMatrix(std::size_t n);

    /// Row-major nested rows; every row must have rows.size() entries.
    ExpPolyMatrix(std::initializer_list<std::initializer_list<ExpPoly>> rows);

    [[nodiscard]] std::size_t dim() const noexcept { return n_; }
    ExpPoly& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
    const ExpPoly& operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

private:
    std::size_t n_;
    std::vector<ExpPoly> data_;
};

/// Exact determinant. Division-free Laplace expansion along rows with every
/// column-subset minor memoized, so an n x n matrix costs n * 2^(n-1) ring
/// multiplications.
ExpPoly determinant(const ExpPolyMatrix& m);

}  // namespace fdrelay::algebra
