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

#ifndef AMG_MATRIX_GAME_HPP_
#define AMG_MATRIX_GAME_HPP_

#include <array>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "amg/common.hpp"

namespace amg {

// State of an iterated matrix game: the distinguished initial state before
// any joint action, or the joint action played on the previous step.
struct GameState {
  int row_action = -1;
  int col_action = -1;

  static GameState initial() { return GameState{}; }
  static GameState joint(int a_row, int a_col) {
    return GameState{a_row, a_col};
  }

  bool is_initial() const { return row_action < 0; }

  friend bool operator==(const GameState&, const GameState&) = default;
};

// Two-player repeated matrix game. Immutable after construction; safe to
// share across concurrent runs.
struct MatrixGame {
  std::string name;
  std::array<int, 2> n_actions{2, 2};
  Eigen::MatrixXd payoff_row;  // payoff_row(a_row, a_col)
  Eigen::MatrixXd payoff_col;

  // Number of distinct states: initial plus all joint actions.
  int state_count() const { return 1 + n_actions[0] * n_actions[1]; }

  double reward(int player, int a_row, int a_col) const {
    return player == 0 ? payoff_row(a_row, a_col) : payoff_col(a_row, a_col);
  }

  double min_payoff() const {
    return std::min(payoff_row.minCoeff(), payoff_col.minCoeff());
  }
  double max_payoff() const {
    return std::max(payoff_row.maxCoeff(), payoff_col.maxCoeff());
  }
};

// One agent's view of an environment step. The state fields are global
// (row/col oriented); own_action and reward are from this agent's side.
struct Transition {
  GameState state;
  int own_action = 0;
  int other_action = 0;
  double reward = 0.0;
  GameState next;
};

// Builds one of the built-in games: ibs, ic, imp, ipd. Throws ConfigError
// for anything else.
MatrixGame make_game(const std::string& name);

// Plays one joint action. Returns the row player's and the column player's
// transitions; both share the global state and next state.
std::pair<Transition, Transition> step(const MatrixGame& game,
                                       const GameState& state, int a_row,
                                       int a_col);

// Index of a state in the canonical enumeration: initial first, then joint
// actions in row-major order.
int state_index(const MatrixGame& game, const GameState& state);

// Inverse of state_index.
GameState state_from_index(const MatrixGame& game, int index);

// One-hot encoding over the canonical state enumeration.
Eigen::VectorXd encode_state(const MatrixGame& game, const GameState& state);

}  // namespace amg

#endif  // AMG_MATRIX_GAME_HPP_
