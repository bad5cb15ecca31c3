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

#ifndef AMG_NET_HPP_
#define AMG_NET_HPP_

#include <vector>

#include <Eigen/Dense>

#include "amg/common.hpp"
#include "amg/rng.hpp"

namespace amg {

// Records the activations of one forward pass so the matching backward pass
// can run later. acts[0] is the input, acts[l+1] the output of layer l
// (post-relu on hidden layers).
struct Trace {
  std::vector<Eigen::VectorXd> acts;
  bool recorded = false;
};

// Column-wise trace over a batch of inputs. acts[l] holds one column per
// batch element; delta[l] collects the matching backward deltas so the
// parameter gradients can be formed with one matrix product per layer.
struct BatchTrace {
  std::vector<Eigen::MatrixXd> acts;
  std::vector<Eigen::MatrixXd> delta;
  int cols = 0;
  bool recorded = false;
};

// Fully-connected net: relu on hidden layers, linear output, parameters in
// one flat vector (weights column-major, then bias, per layer). The flat
// layout keeps the optimizer and finite-difference probes trivial.
class DenseNet {
 public:
  DenseNet() = default;
  explicit DenseNet(std::vector<int> widths);  // zero-initialized

  static DenseNet random(std::vector<int> widths, Rng& rng);

  int input_dim() const { return widths_.front(); }
  int output_dim() const { return widths_.back(); }
  int layer_count() const { return static_cast<int>(widths_.size()) - 1; }
  const std::vector<int>& widths() const { return widths_; }
  int param_count() const { return static_cast<int>(params_.size()); }

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;

  // Plain evaluation.
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  // Evaluation that records activations for a later backward pass.
  Eigen::VectorXd forward(const Eigen::VectorXd& x, Trace& trace) const;

  // Reverse-mode pass for the computation recorded in `trace`. Accumulates
  // parameter gradients into `grad` (same layout/size as params()) and
  // returns the gradient with respect to the input.
  Eigen::VectorXd backward(const Trace& trace, const Eigen::VectorXd& dy,
                           Eigen::VectorXd& grad) const;

  // Batched interface. The caller sizes the trace, fills input columns of
  // acts[0], and runs columns either one at a time (when later inputs depend
  // on earlier outputs) or all at once. Backward passes only record deltas;
  // accumulate_grads forms the parameter gradients afterwards.
  void batch_init(BatchTrace& trace, int cols) const;
  void forward_col(BatchTrace& trace, int col) const;
  void forward_all(BatchTrace& trace) const;
  // Per-column reverse pass; returns the input gradient for that column.
  Eigen::VectorXd backward_col(BatchTrace& trace, int col,
                               const Eigen::VectorXd& dy) const;
  // Whole-batch reverse pass; optionally emits input gradients.
  void backward_all(BatchTrace& trace, const Eigen::MatrixXd& dy,
                    Eigen::MatrixXd* dx) const;
  void accumulate_grads(const BatchTrace& trace, Eigen::VectorXd& grad) const;

 private:
  std::vector<int> widths_;
  std::vector<int> w_offset_, b_offset_;
  Eigen::VectorXd params_;
};

// Adaptive-moment optimizer state for one flat parameter vector.
struct AdamState {
  AdamState() = default;
  AdamState(int n, double lr, double beta1 = 0.9, double beta2 = 0.999,
            double eps = 1e-8)
      : m(Eigen::VectorXd::Zero(n)),
        v(Eigen::VectorXd::Zero(n)),
        lr(lr),
        beta1(beta1),
        beta2(beta2),
        eps(eps) {}

  Eigen::VectorXd m, v;
  long step_count = 0;
  double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
};

// One bias-corrected adaptive-moment update, in place.
void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad);

}  // namespace amg

#endif  // AMG_NET_HPP_
