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

#ifndef AMG_POLICY_SWEEP_HPP_
#define AMG_POLICY_SWEEP_HPP_

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "amg/agent.hpp"
#include "amg/matrix_game.hpp"

namespace amg {

// Deterministic stationary policy: one action per state index.
using StationaryPolicy = std::vector<int>;

// All |A|^|S| deterministic stationary policies of one player, enumerated
// without duplicates.
std::vector<StationaryPolicy> enumerate_stationary_policies(
    const MatrixGame& game, int player);

// Opponent specification for rollout evaluation: a fixed stationary policy
// or a live tabular q-learner built fresh per rollout.
struct ScriptedSpec {
  StationaryPolicy policy;
};

struct QLearnerSpec {
  double lr = 0.5;
  double gamma = 0.9;
  double eps = 0.05;
  Eigen::MatrixXd q_init;  // state x action; empty means zeros
};

using OpponentSpec = std::variant<ScriptedSpec, QLearnerSpec>;

struct PairAverage {
  double row = 0.0;
  double col = 0.0;
};

// Long-run average rewards of both players with the given side behaviors,
// discarding the first half of each rollout as burn-in. Fully deterministic
// matchups need (and take) a single rollout.
PairAverage average_rewards(const MatrixGame& game, const OpponentSpec& row,
                            const OpponentSpec& col, long horizon,
                            int n_rollouts, std::uint64_t seed);

// Monte-Carlo estimate of the row player's average reward for a fixed
// stationary policy against the opponent spec. horizon must be >= 10^4.
double exact_avg_reward(const MatrixGame& game, const StationaryPolicy& policy,
                        const OpponentSpec& opponent, long horizon,
                        int n_rollouts, std::uint64_t seed);

enum class OpponentMode { kGreedy, kGlie };

struct SweepResult {
  Eigen::VectorXd axis;            // initial q offsets, one per grid line
  Eigen::MatrixXd best_avg_reward; // (i, j): q_init(action0)=axis[i],
                                   // q_init(action1)=axis[j]
  double range() const {
    return best_avg_reward.maxCoeff() - best_avg_reward.minCoeff();
  }
};

// Brute-forces, for every opponent q-value initialization on the grid, the
// best achievable row average reward over all deterministic stationary row
// policies. Greedy mode runs the opponent with eps = 0, glie mode with the
// published eps = 0.05.
SweepResult policy_iteration_sweep(const MatrixGame& game, OpponentMode mode,
                                   const Eigen::VectorXd& axis, long horizon,
                                   int n_rollouts, std::uint64_t seed);

struct DeviationReport {
  double gain_row = 0.0;
  double gain_col = 0.0;
  StationaryPolicy best_row, best_col;

  double max_gain() const { return std::max(gain_row, gain_col); }
};

// Best unilateral average-reward improvement for each player when the other
// keeps its stationary policy fixed. Gains near zero certify a restricted
// equilibrium of the stationary class.
DeviationReport deviation_gain(const MatrixGame& game,
                               const StationaryPolicy& row_policy,
                               const StationaryPolicy& col_policy,
                               long horizon, int n_rollouts,
                               std::uint64_t seed);

}  // namespace amg

#endif  // AMG_POLICY_SWEEP_HPP_
