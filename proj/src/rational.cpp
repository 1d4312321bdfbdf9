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

#include "fdrelay/rational.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>

namespace fdrelay::algebra {

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
    std::string s(text);
    const bool has_digits = s.find_first_of("0123456789") != std::string::npos;
    const auto first_bad = s.find_first_not_of("+-0123456789", 0);
    if (s.empty() || !has_digits || first_bad != std::string::npos || s.find_first_of("+-", 1) != std::string::npos) {
        throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    }
    if (s.front() == '+') s.erase(0, 1);
    return Integer(s, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    Rational r;
    if (slash == std::string_view::npos) {
        r = Rational(parse_integer(text, text));
        return r;
    }
    Integer num = parse_integer(text.substr(0, slash), text);
    Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    return ratio(num, den);
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

long double to_long_double(const Rational& value) {
    // Numerator and denominator can each exceed the long double range.
    return boost::multiprecision::mpf_float_50(value.get_mpq_t()).convert_to<long double>();
}

Rational ratio(const Integer& num, const Integer& den) {
    if (den == 0) throw std::invalid_argument("ratio: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Integer factorial(unsigned n) {
    Integer result;
    mpz_fac_ui(result.get_mpz_t(), n);
    return result;
}

}  // namespace fdrelay::algebra
