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

#ifndef AMG_LOOP_HPP_
#define AMG_LOOP_HPP_

#include <variant>

#include "amg/agent.hpp"
#include "amg/matrix_game.hpp"
#include "amg/rng.hpp"

namespace amg {

// Fixed stationary policy: one action per state index.
struct ScriptedAgent {
  std::vector<int> action_by_state;
  int player = 1;
};

using AnyAgent = std::variant<NeuralAgent, TabularQLearner, ScriptedAgent>;

// Per-step observables. Losses are the row agent's when the row agent is
// neural, otherwise the column agent's; zero when neither side trains nets.
struct StepMetrics {
  double r_row = 0.0, r_col = 0.0;
  double rho_row = 0.0, rho_col = 0.0;
  double critic_loss = 0.0, policy_loss = 0.0, elbo_loss = 0.0;
};

// Mutable environment state of one matchup cell. Each agent draws from its
// own child stream so a cell is a pure function of its seed.
struct World {
  MatrixGame game;
  GameState state = GameState::initial();
  long t = 0;
  Rng rng_row{0}, rng_col{1};

  World(MatrixGame g, std::uint64_t seed)
      : game(std::move(g)),
        rng_row(Rng(seed).child(100)),
        rng_col(Rng(seed).child(200)) {}
};

// The other agent's current action distribution at a given state, read
// directly during centralized training.
OppDistFn true_policy_dist(const AnyAgent& other, const MatrixGame& game);

// Runs one execute-infer-train iteration for both agents: joint action,
// environment step, belief propagation and buffer append, then critic/gain,
// policy, inference, and target updates for every learning agent.
StepMetrics further_loop_step(World& world, AnyAgent& row, AnyAgent& col);

// Full update of one neural agent from the most recent transition plus one
// inference window step. `other` supplies the opponent policy for masac
// critics; `t` gates warmup and the inference-update cadence.
void update_neural_agent(NeuralAgent& self, const AnyAgent& other,
                         const MatrixGame& game, long t, Rng& rng);

// Simultaneous update of two masac agents, each reading the other's policy.
void masac_step(NeuralAgent& agent_i, NeuralAgent& agent_j,
                const MatrixGame& game, long t, Rng& rng_i, Rng& rng_j);

}  // namespace amg

#endif  // AMG_LOOP_HPP_
