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

#include "amg/gaussian.hpp"

#include <cmath>

namespace amg {

double diag_gaussian_kl(const DiagGaussian& p, const DiagGaussian& q) {
  AMG_CHECK_MSG(p.dim() == q.dim(), "KL dimension mismatch");
  const Eigen::ArrayXd var_p = (2.0 * p.log_std.array()).exp();
  const Eigen::ArrayXd var_q = (2.0 * q.log_std.array()).exp();
  const Eigen::ArrayXd diff = p.mean.array() - q.mean.array();
  return (q.log_std.array() - p.log_std.array() +
          (var_p + diff.square()) / (2.0 * var_q) - 0.5)
      .sum();
}

Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits) {
  AMG_CHECK(logits.size() > 0 && logits.allFinite());
  const double m = logits.maxCoeff();
  const double lse = std::log((logits.array() - m).exp().sum()) + m;
  return logits.array() - lse;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  return log_softmax(logits).array().exp();
}

double entropy(const Eigen::VectorXd& probs) {
  double h = 0.0;
  for (int i = 0; i < probs.size(); ++i)
    if (probs[i] > 0.0) h -= probs[i] * std::log(probs[i]);
  return h;
}

}  // namespace amg
