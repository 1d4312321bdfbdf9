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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fdrelay::stats {

/// z quantiles of the standard normal.
inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for `successes` out of `trials` at quantile z.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

/// sup_x |F_n(x) - F(x)| for the empirical CDF of `samples`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// sup_x |F_n(x) - G_m(x)|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Ordinary least squares slope of y on x; needs >= 2 distinct x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace fdrelay::stats
