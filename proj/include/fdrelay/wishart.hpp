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

// Largest-eigenvalue law of an uncorrelated complex central Wishart matrix
// W = H^H H, H an a x b (or b x a) matrix of i.i.d. unit-variance CN(0,1)
// entries.  The CDF is
//
//     F(lambda) = K_{a,b} det G(lambda),   G_ij = gamma(b - a + i + j - 1, lambda)
//
// and its derivative expands into a finite sum
//
//     f(lambda) = sum_{n,m} D_{n,m} / m! * n^{m+1} lambda^m e^{-n lambda},
//
// i.e. a mixture (with signed weights D summing to one) of Gamma(m+1, 1/n)
// densities.  Everything here is exact.

#pragma once

#include "fdrelay/exp_poly.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fdrelay::wishart {

using algebra::ExpPoly;
using algebra::Rational;

/// Dimensions of the Wishart law: a = min dimension, b = max dimension.
class WishartDims {
public:
    /// Throws std::invalid_argument unless 1 <= a <= b.
    WishartDims(int a, int b);

    /// Orders an arbitrary (rows, cols) pair; both must be >= 1.
    static WishartDims from_shape(int rows, int cols);

    [[nodiscard]] int a() const noexcept { return a_; }
    [[nodiscard]] int b() const noexcept { return b_; }

    /// Highest polynomial degree carried by the e^{-n lambda} family.
    [[nodiscard]] int max_degree(int n) const noexcept { return (a_ + b_ - 2 * n) * n; }
    [[nodiscard]] int min_degree() const noexcept { return b_ - a_; }

    friend bool operator==(const WishartDims&, const WishartDims&) = default;
    friend auto operator<=>(const WishartDims&, const WishartDims&) = default;

private:
    int a_;
    int b_;
};

std::string to_string(const WishartDims& dims);

/// K_{a,b} = 1 / prod_{i=1}^{a} (a-i)! (b-i)!
Rational k_ab(const WishartDims& dims);

/// gamma(s, lambda) = (s-1)! (1 - e^{-lambda} sum_{j<s} lambda^j / j!), s >= 1.
ExpPoly lower_gamma_entry(int s);

/// K_{a,b} det G(lambda): the CDF of the largest eigenvalue.
ExpPoly max_eig_cdf(const WishartDims& dims);

/// Exact density of the largest eigenvalue.
ExpPoly max_eig_density(const WishartDims& dims);

/// Signalled when the coefficient extraction leaves a nonzero residual or
/// meets a term outside the expected index ranges.
class NonzeroResidual : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CoeffEntry {
    int n = 0;  ///< exponential rate index, 1..a
    int m = 0;  ///< polynomial degree, (b-a)..(a+b-2n)n
    Rational d;
    long double d_approx = 0.0L;
};

/// Coefficient table D_{n,m} for one WishartDims, immutable after
/// construction.  Entries are stored in extraction order (n ascending, m
/// descending) and cover the full index range, zeros included.
class CoeffTable {
public:
    static constexpr int kFormatVersion = 1;
    static constexpr const char* kAlgorithm = "exact-peel/1";

    /// Validates index ranges against dims; throws std::invalid_argument.
    CoeffTable(WishartDims dims, Rational k_ab, std::vector<CoeffEntry> entries,
               std::string provenance = kAlgorithm);

    [[nodiscard]] const WishartDims& dims() const noexcept { return dims_; }
    [[nodiscard]] const Rational& k_ab() const noexcept { return k_ab_; }
    [[nodiscard]] const std::vector<CoeffEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] const std::string& provenance() const noexcept { return provenance_; }

    /// Below this argument the unit-scale CDF is summed from its Taylor series.
    static constexpr long double kSeriesRadius = 0.5L;

    /// Taylor coefficients about 0 of the unit-scale CDF, computed exactly and
    /// then rounded. Entry j multiplies lambda^j; entries below a*b are zero.
    [[nodiscard]] const std::vector<long double>& cdf_series() const noexcept { return cdf_series_; }

    /// D_{n,m}; zero when outside the index range.
    [[nodiscard]] Rational coefficient(int n, int m) const;

    /// Exact sum of all D_{n,m}.
    [[nodiscard]] Rational sum() const;

    /// sum_{n,m} D_{n,m}/m! n^{m+1} lambda^m e^{-n lambda}, exactly.
    [[nodiscard]] ExpPoly density() const;

    /// sum_{n,m} D_{n,m} gamma(m+1, n lambda)/m!, exactly.
    [[nodiscard]] ExpPoly cdf() const;

    friend bool operator==(const CoeffTable& lhs, const CoeffTable& rhs);

private:
    WishartDims dims_;
    Rational k_ab_;
    std::vector<CoeffEntry> entries_;
    std::string provenance_;
    std::vector<long double> cdf_series_;
};

/// Peels K * d/dlambda det G term by term: for n = 1..a and m from
/// (a+b-2n)n down to b-a, reads a_{n,m} at the dominant position of the
/// residual, records D_{n,m} = a_{n,m} K m! / n^{m+1} and subtracts the term.
/// Throws NonzeroResidual when anything is left over.
CoeffTable extract_coefficients(const WishartDims& dims);

}  // namespace fdrelay::wishart
