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

#include "amg/net.hpp"

#include <cmath>

namespace amg {

DenseNet::DenseNet(std::vector<int> widths) : widths_(std::move(widths)) {
  AMG_CHECK_MSG(widths_.size() >= 2, "need at least input and output widths");
  int total = 0;
  for (int l = 0; l + 1 < static_cast<int>(widths_.size()); ++l) {
    AMG_CHECK_MSG(widths_[l] > 0 && widths_[l + 1] > 0, "positive widths");
    w_offset_.push_back(total);
    total += widths_[l + 1] * widths_[l];
    b_offset_.push_back(total);
    total += widths_[l + 1];
  }
  params_ = Eigen::VectorXd::Zero(total);
}

DenseNet DenseNet::random(std::vector<int> widths, Rng& rng) {
  DenseNet net(std::move(widths));
  for (int l = 0; l < net.layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.widths_[l]));
    const int n = net.widths_[l + 1] * net.widths_[l];
    for (int k = 0; k < n; ++k)
      net.params_[net.w_offset_[l] + k] = bound * (2.0 * rng.uniform() - 1.0);
  }
  return net;
}

Eigen::Map<const Eigen::MatrixXd> DenseNet::weight(int layer) const {
  return {params_.data() + w_offset_[layer], widths_[layer + 1],
          widths_[layer]};
}

Eigen::Map<const Eigen::VectorXd> DenseNet::bias(int layer) const {
  return {params_.data() + b_offset_[layer], widths_[layer + 1]};
}

Eigen::VectorXd DenseNet::forward(const Eigen::VectorXd& x) const {
  AMG_CHECK_MSG(x.size() == input_dim(), "input dimension mismatch");
  Eigen::VectorXd h = x;
  for (int l = 0; l < layer_count(); ++l) {
    Eigen::VectorXd pre = weight(l) * h + bias(l);
    if (l + 1 < layer_count()) pre = pre.cwiseMax(0.0);
    h = std::move(pre);
  }
  return h;
}

Eigen::VectorXd DenseNet::forward(const Eigen::VectorXd& x,
                                  Trace& trace) const {
  AMG_CHECK_MSG(x.size() == input_dim(), "input dimension mismatch");
  trace.acts.resize(layer_count() + 1);
  trace.acts[0] = x;
  for (int l = 0; l < layer_count(); ++l) {
    trace.acts[l + 1].noalias() = weight(l) * trace.acts[l];
    trace.acts[l + 1] += bias(l);
    if (l + 1 < layer_count())
      trace.acts[l + 1] = trace.acts[l + 1].cwiseMax(0.0);
  }
  trace.recorded = true;
  return trace.acts.back();
}

Eigen::VectorXd DenseNet::backward(const Trace& trace,
                                   const Eigen::VectorXd& dy,
                                   Eigen::VectorXd& grad) const {
  AMG_CHECK_MSG(trace.recorded, "backward without a recorded forward pass");
  AMG_CHECK(static_cast<int>(trace.acts.size()) == layer_count() + 1);
  AMG_CHECK(dy.size() == output_dim());
  AMG_CHECK(grad.size() == params_.size());
  Eigen::VectorXd delta = dy;
  Eigen::VectorXd dx;
  for (int l = layer_count() - 1; l >= 0; --l) {
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + w_offset_[l],
                                   widths_[l + 1], widths_[l]);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + b_offset_[l],
                                   widths_[l + 1]);
    gw.noalias() += delta * trace.acts[l].transpose();
    gb += delta;
    dx.noalias() = weight(l).transpose() * delta;
    if (l > 0) {
      // relu mask from the recorded post-activation values
      delta = (trace.acts[l].array() > 0.0).select(dx, 0.0);
    }
  }
  return dx;
}

void DenseNet::batch_init(BatchTrace& trace, int cols) const {
  AMG_CHECK(cols >= 1);
  trace.acts.resize(layer_count() + 1);
  trace.delta.resize(layer_count());
  for (int l = 0; l <= layer_count(); ++l)
    trace.acts[l].resize(widths_[l], cols);
  for (int l = 0; l < layer_count(); ++l)
    trace.delta[l].setZero(widths_[l + 1], cols);
  trace.cols = cols;
  trace.recorded = true;
}

void DenseNet::forward_col(BatchTrace& trace, int col) const {
  AMG_CHECK(trace.recorded && col >= 0 && col < trace.cols);
  for (int l = 0; l < layer_count(); ++l) {
    trace.acts[l + 1].col(col).noalias() = weight(l) * trace.acts[l].col(col);
    trace.acts[l + 1].col(col) += bias(l);
    if (l + 1 < layer_count())
      trace.acts[l + 1].col(col) = trace.acts[l + 1].col(col).cwiseMax(0.0);
  }
}

void DenseNet::forward_all(BatchTrace& trace) const {
  AMG_CHECK(trace.recorded);
  for (int l = 0; l < layer_count(); ++l) {
    trace.acts[l + 1].noalias() = weight(l) * trace.acts[l];
    trace.acts[l + 1].colwise() += bias(l);
    if (l + 1 < layer_count())
      trace.acts[l + 1] = trace.acts[l + 1].cwiseMax(0.0);
  }
}

Eigen::VectorXd DenseNet::backward_col(BatchTrace& trace, int col,
                                       const Eigen::VectorXd& dy) const {
  AMG_CHECK(trace.recorded && col >= 0 && col < trace.cols);
  AMG_CHECK(dy.size() == output_dim());
  trace.delta[layer_count() - 1].col(col) = dy;
  Eigen::VectorXd dx;
  for (int l = layer_count() - 1; l >= 0; --l) {
    dx.noalias() = weight(l).transpose() * trace.delta[l].col(col);
    if (l > 0)
      trace.delta[l - 1].col(col) =
          (trace.acts[l].col(col).array() > 0.0).select(dx, 0.0);
  }
  return dx;
}

void DenseNet::backward_all(BatchTrace& trace, const Eigen::MatrixXd& dy,
                            Eigen::MatrixXd* dx) const {
  AMG_CHECK(trace.recorded);
  AMG_CHECK(dy.rows() == output_dim() && dy.cols() == trace.cols);
  trace.delta[layer_count() - 1] = dy;
  for (int l = layer_count() - 1; l >= 1; --l) {
    Eigen::MatrixXd back = weight(l).transpose() * trace.delta[l];
    trace.delta[l - 1] = (trace.acts[l].array() > 0.0).select(back, 0.0);
  }
  if (dx != nullptr) dx->noalias() = weight(0).transpose() * trace.delta[0];
}

void DenseNet::accumulate_grads(const BatchTrace& trace,
                                Eigen::VectorXd& grad) const {
  AMG_CHECK(trace.recorded && grad.size() == params_.size());
  for (int l = 0; l < layer_count(); ++l) {
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + w_offset_[l], widths_[l + 1],
                                   widths_[l]);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + b_offset_[l],
                                   widths_[l + 1]);
    gw.noalias() += trace.delta[l] * trace.acts[l].transpose();
    gb += trace.delta[l].rowwise().sum();
  }
}

void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad) {
  AMG_CHECK(params.size() == grad.size() && params.size() == state.m.size());
  state.step_count += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v.array() =
      state.beta2 * state.v.array() + (1.0 - state.beta2) * grad.array().square();
  const double c1 = 1.0 - std::pow(state.beta1, state.step_count);
  const double c2 = 1.0 - std::pow(state.beta2, state.step_count);
  params.array() -= state.lr * (state.m.array() / c1) /
                    ((state.v.array() / c2).sqrt() + state.eps);
}

}  // namespace amg
