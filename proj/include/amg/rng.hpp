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

#ifndef AMG_RNG_HPP_
#define AMG_RNG_HPP_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace amg {

// splitmix64 finalizer; used to derive independent child streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Every source of randomness in a run is a child of one seeded Rng, so a run
// is a pure function of (config, seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed), seed_(seed) {}

  // Independent deterministic stream; children with distinct tags never
  // overlap regardless of how much the parent has been consumed.
  Rng child(std::uint64_t tag) const { return Rng(mix_seed(seed_, tag)); }

  std::uint64_t seed() const { return seed_; }

  double uniform() { return unit_(gen_); }

  // Uniform over {0, ..., n-1}.
  int uniform_int(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(gen_);
  }

  double normal() { return gauss_(gen_); }

  Eigen::VectorXd normal_vec(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss_(gen_);
    return v;
  }

  // Draw an index from an explicit discrete distribution (need not be
  // normalized to machine precision; the tail index absorbs the residual).
  int categorical(const Eigen::VectorXd& probs) {
    double u = uniform();
    double acc = 0.0;
    for (int i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace amg

#endif  // AMG_RNG_HPP_
