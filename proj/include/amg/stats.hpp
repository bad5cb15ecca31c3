// Copyright 2026 The amg-lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AMG_STATS_HPP_
#define AMG_STATS_HPP_

#include <vector>

namespace amg {

double mean(const std::vector<double>& xs);

// Unbiased sample standard deviation.
double sample_std(const std::vector<double>& xs);

// Two-sided Student-t critical value: the p-quantile of the t distribution
// with `dof` degrees of freedom (e.g. p = 0.975 for a 95% interval).
double t_quantile(double p, int dof);

// Half-width of the two-sided 95% t confidence interval for the mean.
double t_interval_halfwidth(const std::vector<double>& xs);

// Trailing moving average with the given window (first entries average over
// the shorter available prefix).
std::vector<double> moving_average(const std::vector<double>& xs, int window);

}  // namespace amg

#endif  // AMG_STATS_HPP_
