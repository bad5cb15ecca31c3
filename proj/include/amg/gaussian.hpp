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

#ifndef AMG_GAUSSIAN_HPP_
#define AMG_GAUSSIAN_HPP_

#include <Eigen/Dense>

#include "amg/common.hpp"

namespace amg {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

// Diagonal Gaussian. log_std is clamped to [kLogStdMin, kLogStdMax] at
// construction to keep the variance bounded away from collapse and blowup.
struct DiagGaussian {
  Eigen::VectorXd mean;
  Eigen::VectorXd log_std;

  DiagGaussian() = default;
  DiagGaussian(Eigen::VectorXd mean_in, Eigen::VectorXd log_std_in)
      : mean(std::move(mean_in)),
        log_std(log_std_in.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax)) {
    AMG_CHECK(mean.size() == log_std.size());
  }

  static DiagGaussian standard(int dim) {
    return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim)};
  }

  int dim() const { return static_cast<int>(mean.size()); }
  Eigen::VectorXd std_dev() const { return log_std.array().exp(); }
};

// mean + exp(log_std) .* noise
inline Eigen::VectorXd sample_reparam(const DiagGaussian& d,
                                      const Eigen::VectorXd& noise) {
  AMG_CHECK(noise.size() == d.mean.size());
  return d.mean.array() + d.log_std.array().exp() * noise.array();
}

// Closed-form KL(p || q) for diagonal Gaussians; nonnegative, zero iff p == q.
double diag_gaussian_kl(const DiagGaussian& p, const DiagGaussian& q);

// Max-subtracted, overflow-safe log softmax.
Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

// Shannon entropy of the categorical distribution given by `probs`.
double entropy(const Eigen::VectorXd& probs);

}  // namespace amg

#endif  // AMG_GAUSSIAN_HPP_
