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

#include <catch2/catch_amalgamated.hpp>

#include "fdrelay/exp_poly.hpp"
#include "fdrelay/rational.hpp"
#include "fdrelay/wishart.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace fdrelay::algebra;
using Catch::Matchers::WithinAbs;

namespace {

ExpPoly random_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> n_terms(0, 4);
    std::uniform_int_distribution<int> idx(0, 3);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 5);
    ExpPoly p;
    for (int t = n_terms(rng); t > 0; --t) {
        p += ExpPoly::monomial(idx(rng), idx(rng), ratio(num(rng), den(rng)));
    }
    return p;
}

using Big = boost::multiprecision::cpp_bin_float_50;

Big to_big(const Rational& q) {
    return Big(q.get_num().get_str()) / Big(q.get_den().get_str());
}

// Term-by-term evaluation at 50 significant digits.
Big evaluate_reference(const ExpPoly& p, long double lambda) {
    const Big x(lambda);
    Big sum = 0;
    for (const auto& [key, c] : p.terms()) {
        sum += to_big(c) * pow(x, key.l) * exp(-Big(key.k) * x);
    }
    return sum;
}

}  // namespace

TEST_CASE("rational helpers") {
    CHECK(ratio(4, -6) == Rational(-2, 3));
    CHECK(ratio(4, -6).get_den() == 3);
    CHECK(to_string(ratio(6, 3)) == "2");
    CHECK(to_string(ratio(-3, 12)) == "-1/4");
    CHECK(parse_rational("10/4") == ratio(5, 2));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(factorial(0) == 1);
    CHECK(factorial(10) == 3628800);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(" 1/2"), std::invalid_argument);
    CHECK(to_long_double(ratio(1, 3)) == 1.0L / 3.0L);
}

TEST_CASE("add") {
    const auto le = ExpPoly::monomial(1, 1, 1);
    CHECK((le + ExpPoly::monomial(1, 1, -1)).is_zero());

    const auto sum = add(ExpPoly::constant(1), ExpPoly::monomial(1, 0, 1));
    REQUIRE(sum.size() == 2);
    CHECK(sum.coefficient(0, 0) == 1);
    CHECK(sum.coefficient(1, 0) == 1);

    const auto merged = ExpPoly::monomial(1, 2, 2) + ExpPoly::monomial(1, 2, 3);
    CHECK(merged == ExpPoly::monomial(1, 2, 5));
}

TEST_CASE("mul") {
    const auto one_minus = ExpPoly::from_terms({{0, 0, 1}, {1, 0, -1}});
    CHECK(mul(one_minus, one_minus) == ExpPoly::from_terms({{0, 0, 1}, {1, 0, -2}, {2, 0, 1}}));

    const auto le = ExpPoly::monomial(1, 1, 1);
    CHECK(le * le == ExpPoly::monomial(2, 2, 1));
    CHECK((le * ExpPoly{}).is_zero());
    CHECK((le * Rational(0)).is_zero());
}

TEST_CASE("differentiate") {
    CHECK(differentiate(ExpPoly::monomial(0, 2, 1)) == ExpPoly::monomial(0, 1, 2));
    CHECK(differentiate(ExpPoly::monomial(2, 0, 1)) == ExpPoly::monomial(2, 0, -2));
    CHECK(differentiate(ExpPoly::monomial(1, 1, 1)) == ExpPoly::from_terms({{1, 0, 1}, {1, 1, -1}}));
    CHECK(differentiate(ExpPoly::constant(7)).is_zero());
}

TEST_CASE("canonical form drops zeros and orders by dominance") {
    const auto p = ExpPoly::from_terms({{2, 0, 1}, {1, 0, 3}, {1, 4, 2}, {0, 1, 0}, {1, 4, -2}});
    REQUIRE(p.size() == 2);
    auto it = p.terms().begin();
    CHECK(it->first == TermKey{1, 0});
    ++it;
    CHECK(it->first == TermKey{2, 0});

    const auto q = ExpPoly::from_terms({{1, 0, 1}, {1, 3, 1}, {0, 0, 5}});
    CHECK(q.dominant_term().first == TermKey{0, 0});
    CHECK((q - ExpPoly::constant(5)).dominant_term().first == TermKey{1, 3});
}

TEST_CASE("negative exponents are rejected") {
    CHECK_THROWS_AS(ExpPoly::monomial(-1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(ExpPoly::monomial(0, -2, 1), std::invalid_argument);
}

TEST_CASE("leading_coefficient") {
    const auto p = ExpPoly::from_terms({{1, 2, 1}, {2, 0, -2}});
    CHECK(leading_coefficient(p, 1, 2) == 1);
    CHECK(leading_coefficient(p, 2, 0) == -2);
    CHECK(leading_coefficient(p, 3, 5) == 0);
}

TEST_CASE("ring axioms on random instances") {
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_poly(rng);
        const auto q = random_poly(rng);
        const auto r = random_poly(rng);
        CHECK(p + q == q + p);
        CHECK(p * q == q * p);
        CHECK((p + q) + r == p + (q + r));
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
        CHECK(p - p == ExpPoly{});
        CHECK(p * ExpPoly::constant(1) == p);
    }
}

TEST_CASE("product rule on random instances") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_poly(rng);
        const auto q = random_poly(rng);
        CHECK(differentiate(mul(p, q)) == add(mul(differentiate(p), q), mul(p, differentiate(q))));
    }
}

TEST_CASE("determinant examples") {
    const auto one_minus = ExpPoly::from_terms({{0, 0, 1}, {1, 0, -1}});
    CHECK(determinant(ExpPolyMatrix{{one_minus}}) == one_minus);

    const ExpPolyMatrix identity{{ExpPoly::constant(1), ExpPoly{}}, {ExpPoly{}, ExpPoly::constant(1)}};
    CHECK(determinant(identity) == ExpPoly::constant(1));

    using fdrelay::wishart::lower_gamma_entry;
    const ExpPolyMatrix g{{lower_gamma_entry(1), lower_gamma_entry(2)}, {lower_gamma_entry(2), lower_gamma_entry(3)}};
    const auto expected = ExpPoly::from_terms({{0, 0, 1}, {1, 2, -1}, {1, 0, -2}, {2, 0, 1}});
    CHECK(determinant(g) == expected);
    for (long double x : {0.1L, 1.0L, 2.5L, 7.0L}) {
        const long double g11 = 1 - std::exp(-x);
        const long double g12 = 1 - (1 + x) * std::exp(-x);
        const long double g22 = 2 - (x * x + 2 * x + 2) * std::exp(-x);
        CHECK_THAT(static_cast<double>(determinant(g).evaluate(x)),
                   WithinAbs(static_cast<double>(g11 * g22 - g12 * g12), 1e-15));
    }
}

TEST_CASE("determinant against the Leibniz formula") {
    std::mt19937 rng(99);
    ExpPolyMatrix m(3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = random_poly(rng);
    }
    const auto leibniz = m(0, 0) * m(1, 1) * m(2, 2) + m(0, 1) * m(1, 2) * m(2, 0) + m(0, 2) * m(1, 0) * m(2, 1) -
                         m(0, 2) * m(1, 1) * m(2, 0) - m(0, 0) * m(1, 2) * m(2, 1) - m(0, 1) * m(1, 0) * m(2, 2);
    CHECK(determinant(m) == leibniz);
}

TEST_CASE("determinant with two equal rows is zero") {
    std::mt19937 rng(3);
    for (std::size_t n : {2u, 3u, 4u, 5u}) {
        ExpPolyMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) m(i, j) = random_poly(rng);
        }
        for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = m(0, j);
        CHECK(determinant(m).is_zero());
    }
}

TEST_CASE("matrix construction is validated") {
    CHECK_THROWS_AS(ExpPolyMatrix(0), std::invalid_argument);
    CHECK_THROWS_AS((ExpPolyMatrix{{ExpPoly{}, ExpPoly{}}, {ExpPoly{}}}), std::invalid_argument);
}

TEST_CASE("evaluation of gamma-matrix expressions matches 50-digit reference") {
    using fdrelay::wishart::lower_gamma_entry;
    std::vector<ExpPoly> polys;
    for (int s = 1; s <= 10; ++s) polys.push_back(lower_gamma_entry(s));
    polys.push_back(lower_gamma_entry(3) * lower_gamma_entry(4));
    polys.push_back(lower_gamma_entry(2) * lower_gamma_entry(6) - lower_gamma_entry(4) * lower_gamma_entry(4));
    for (int a = 1; a <= 3; ++a) polys.push_back(fdrelay::wishart::max_eig_density(fdrelay::wishart::WishartDims(a, 3)));

    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> dist(0.0, 20.0);
    std::vector<long double> points{0.5L, 1.0L, 5.0L, 10.0L, 20.0L};
    for (int i = 0; i < 40; ++i) points.push_back(dist(rng));

    for (const auto& p : polys) {
        for (const long double x : points) {
            const Big ref = evaluate_reference(p, x);
            const Big got(p.evaluate(x));
            const Big rel = abs(got - ref) / abs(ref);
            INFO(p.to_string() << " at " << static_cast<double>(x));
            CHECK(rel.convert_to<double>() <= 1e-12);
        }
    }
}

TEST_CASE("to_string") {
    CHECK(ExpPoly{}.to_string() == "0");
    CHECK(!ExpPoly::from_terms({{1, 2, 2}, {2, 0, -1}}).to_string().empty());
}
