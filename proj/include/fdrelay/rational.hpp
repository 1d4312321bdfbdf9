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

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fdrelay::algebra {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator (GMP canonicalizes after every arithmetic operation).
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "num/den" or "num". Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Lossless "num/den" form; integers are printed without the "/1".
std::string to_string(const Rational& value);

/// Nearest long double (both halves converted separately, so accuracy is a
/// couple of ulps even when numerator or denominator exceed 2^64).
long double to_long_double(const Rational& value);

/// num/den in canonical form; den != 0.
Rational ratio(const Integer& num, const Integer& den);

Integer factorial(unsigned n);

}  // namespace fdrelay::algebra
