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

#ifndef AMG_REPLAY_HPP_
#define AMG_REPLAY_HPP_

#include <vector>

#include <Eigen/Dense>

#include "amg/common.hpp"
#include "amg/gaussian.hpp"
#include "amg/rng.hpp"

namespace amg {

// One stored interaction, from the owning agent's perspective. The belief
// fields are what the agent believed when the transition was generated; the
// training window replays its own chain from the oldest stored belief.
struct ReplayRecord {
  int state_idx = 0;
  int next_idx = 0;
  int own_action = 0;
  int other_action = 0;
  double reward = 0.0;
  Eigen::VectorXd z;       // belief sample fed to the policy at this step
  Eigen::VectorXd z_next;  // belief sample after observing the transition
  DiagGaussian belief;     // full belief at this step
};

// Fixed-capacity ring with FIFO eviction.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity) : capacity_(capacity) {
    AMG_CHECK_MSG(capacity > 0, "replay capacity must be positive");
    ring_.reserve(capacity);
  }

  void push(ReplayRecord rec) {
    if (static_cast<int>(ring_.size()) < capacity_) {
      ring_.push_back(std::move(rec));
    } else {
      ring_[head_] = std::move(rec);
      head_ = (head_ + 1) % capacity_;
    }
  }

  int size() const { return static_cast<int>(ring_.size()); }
  int capacity() const { return capacity_; }

  // k-th record in arrival order, 0 = oldest surviving.
  const ReplayRecord& chronological(int k) const {
    AMG_CHECK(k >= 0 && k < size());
    return ring_[(head_ + k) % ring_.size()];
  }

  const ReplayRecord& back() const {
    AMG_CHECK_MSG(size() > 0, "empty replay buffer");
    return chronological(size() - 1);
  }

  // Most recent n records, oldest first.
  std::vector<const ReplayRecord*> last(int n) const {
    n = std::min(n, size());
    std::vector<const ReplayRecord*> out;
    out.reserve(n);
    for (int k = size() - n; k < size(); ++k)
      out.push_back(&chronological(k));
    return out;
  }

  // Uniform sample without replacement (partial Fisher-Yates over indices).
  std::vector<const ReplayRecord*> sample(int n, Rng& rng) const {
    AMG_CHECK_MSG(n <= size(), "sample larger than buffer");
    std::vector<int> idx(size());
    for (int i = 0; i < size(); ++i) idx[i] = i;
    std::vector<const ReplayRecord*> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
      const int j = i + rng.uniform_int(size() - i);
      std::swap(idx[i], idx[j]);
      out.push_back(&chronological(idx[i]));
    }
    return out;
  }

 private:
  int capacity_;
  int head_ = 0;  // index of the oldest element once full
  std::vector<ReplayRecord> ring_;
};

}  // namespace amg

#endif  // AMG_REPLAY_HPP_
