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

#include "amg/matrix_game.hpp"

namespace amg {
namespace {

MatrixGame make_2x2(std::string name, std::array<double, 4> row,
                    std::array<double, 4> col) {
  MatrixGame g;
  g.name = std::move(name);
  g.n_actions = {2, 2};
  g.payoff_row.resize(2, 2);
  g.payoff_col.resize(2, 2);
  g.payoff_row << row[0], row[1], row[2], row[3];
  g.payoff_col << col[0], col[1], col[2], col[3];
  return g;
}

}  // namespace

MatrixGame make_game(const std::string& name) {
  // Action index 0 is the row player's first listed action: B, U, H, C.
  if (name == "ibs")
    return make_2x2("ibs", {2, 0, 0, 1}, {1, 0, 0, 2});
  if (name == "ic")
    return make_2x2("ic", {4, 0, 0, 8}, {4, 0, 0, 8});
  if (name == "imp")
    return make_2x2("imp", {1, -1, -1, 1}, {-1, 1, 1, -1});
  if (name == "ipd")
    return make_2x2("ipd", {-1, -3, 0, -2}, {-1, 0, -3, -2});
  throw ConfigError("unknown game '" + name +
                    "' (valid choices: ibs, ic, imp, ipd)");
}

std::pair<Transition, Transition> step(const MatrixGame& game,
                                       const GameState& state, int a_row,
                                       int a_col) {
  AMG_CHECK_MSG(a_row >= 0 && a_row < game.n_actions[0], "row action range");
  AMG_CHECK_MSG(a_col >= 0 && a_col < game.n_actions[1], "col action range");
  const GameState next = GameState::joint(a_row, a_col);
  Transition row{state, a_row, a_col, game.payoff_row(a_row, a_col), next};
  Transition col{state, a_col, a_row, game.payoff_col(a_row, a_col), next};
  return {row, col};
}

int state_index(const MatrixGame& game, const GameState& state) {
  if (state.is_initial()) return 0;
  AMG_CHECK(state.row_action < game.n_actions[0] &&
            state.col_action < game.n_actions[1]);
  return 1 + state.row_action * game.n_actions[1] + state.col_action;
}

GameState state_from_index(const MatrixGame& game, int index) {
  AMG_CHECK(index >= 0 && index < game.state_count());
  if (index == 0) return GameState::initial();
  const int k = index - 1;
  return GameState::joint(k / game.n_actions[1], k % game.n_actions[1]);
}

Eigen::VectorXd encode_state(const MatrixGame& game, const GameState& state) {
  Eigen::VectorXd enc = Eigen::VectorXd::Zero(game.state_count());
  enc[state_index(game, state)] = 1.0;
  return enc;
}

}  // namespace amg
