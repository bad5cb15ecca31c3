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

#include "amg/stats.hpp"

#include <cmath>

#include "amg/common.hpp"

namespace amg {
namespace {

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_beta =
      std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) -
                                ln_beta) / a;

  // Continued fraction for I_x(a,b) * a / front.
  const double tiny = 1e-300;
  double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-14) break;
  }
  return front * h;
}

// CDF of the t distribution with `dof` degrees of freedom.
double t_cdf(double t, int dof) {
  const double x = dof / (dof + t * t);
  const double p = 0.5 * incomplete_beta(dof / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - p : p;
}

}  // namespace

double mean(const std::vector<double>& xs) {
  AMG_CHECK(!xs.empty());
  double s = 0.0;
  for (double x : xs) s += x;
  return s / xs.size();
}

double sample_std(const std::vector<double>& xs) {
  AMG_CHECK(xs.size() >= 2);
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / (xs.size() - 1));
}

double t_quantile(double p, int dof) {
  AMG_CHECK(p > 0.0 && p < 1.0 && dof >= 1);
  double lo = -1000.0, hi = 1000.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (t_cdf(mid, dof) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double t_interval_halfwidth(const std::vector<double>& xs) {
  AMG_CHECK(xs.size() >= 2);
  const int n = static_cast<int>(xs.size());
  return t_quantile(0.975, n - 1) * sample_std(xs) / std::sqrt(double(n));
}

std::vector<double> moving_average(const std::vector<double>& xs, int window) {
  AMG_CHECK(window >= 1);
  std::vector<double> out(xs.size());
  double acc = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    acc += xs[i];
    if (i >= static_cast<size_t>(window)) acc -= xs[i - window];
    out[i] = acc / std::min<size_t>(i + 1, window);
  }
  return out;
}

}  // namespace amg
