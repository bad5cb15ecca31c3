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

#include "amg/policy_sweep.hpp"

#include <atomic>
#include <future>
#include <limits>
#include <thread>

namespace amg {
namespace {

// Runtime behavior of one side during a rollout.
struct SideRuntime {
  const StationaryPolicy* scripted = nullptr;
  TabularQLearner learner;
  bool is_learner = false;

  int select(int state_idx, Rng& rng) {
    if (!is_learner) return (*scripted)[state_idx];
    return learner.act(state_idx, rng);
  }
};

SideRuntime make_runtime(const MatrixGame& game, const OpponentSpec& spec,
                         int player) {
  SideRuntime rt;
  if (const auto* scripted = std::get_if<ScriptedSpec>(&spec)) {
    AMG_CHECK(static_cast<int>(scripted->policy.size()) == game.state_count());
    rt.scripted = &scripted->policy;
    return rt;
  }
  const auto& ql = std::get<QLearnerSpec>(spec);
  rt.is_learner = true;
  rt.learner = TabularQLearner(game.state_count(), game.n_actions[player],
                               ql.lr, ql.gamma, ql.eps);
  if (ql.q_init.size() > 0) {
    AMG_CHECK(ql.q_init.rows() == game.state_count() &&
              ql.q_init.cols() == game.n_actions[player]);
    rt.learner.q = ql.q_init;
  }
  return rt;
}

bool deterministic(const OpponentSpec& spec) {
  const auto* ql = std::get_if<QLearnerSpec>(&spec);
  return ql == nullptr || ql->eps == 0.0;
}

}  // namespace

std::vector<StationaryPolicy> enumerate_stationary_policies(
    const MatrixGame& game, int player) {
  const int n_states = game.state_count();
  const int n_actions = game.n_actions[player];
  long long count = 1;
  for (int s = 0; s < n_states; ++s) count *= n_actions;
  std::vector<StationaryPolicy> out;
  out.reserve(count);
  for (long long code = 0; code < count; ++code) {
    StationaryPolicy p(n_states);
    long long c = code;
    for (int s = 0; s < n_states; ++s) {
      p[s] = static_cast<int>(c % n_actions);
      c /= n_actions;
    }
    out.push_back(std::move(p));
  }
  return out;
}

PairAverage average_rewards(const MatrixGame& game, const OpponentSpec& row,
                            const OpponentSpec& col, long horizon,
                            int n_rollouts, std::uint64_t seed) {
  AMG_CHECK_MSG(horizon >= 10000, "horizon must be at least 10^4");
  AMG_CHECK(n_rollouts >= 1);
  if (deterministic(row) && deterministic(col)) n_rollouts = 1;

  const long burn_in = horizon / 2;
  double acc_row = 0.0, acc_col = 0.0;
  for (int r = 0; r < n_rollouts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    SideRuntime side_row = make_runtime(game, row, 0);
    SideRuntime side_col = make_runtime(game, col, 1);
    GameState state = GameState::initial();
    double sum_row = 0.0, sum_col = 0.0;
    for (long t = 0; t < horizon; ++t) {
      const int s_idx = state_index(game, state);
      const int a_row = side_row.select(s_idx, rng);
      const int a_col = side_col.select(s_idx, rng);
      const auto both = step(game, state, a_row, a_col);
      if (t >= burn_in) {
        sum_row += both.first.reward;
        sum_col += both.second.reward;
      }
      const int next_idx = state_index(game, both.first.next);
      if (side_row.is_learner)
        q_update(side_row.learner, s_idx, a_row, both.first.reward, next_idx);
      if (side_col.is_learner)
        q_update(side_col.learner, s_idx, a_col, both.second.reward, next_idx);
      state = both.first.next;
    }
    acc_row += sum_row / static_cast<double>(horizon - burn_in);
    acc_col += sum_col / static_cast<double>(horizon - burn_in);
  }
  return {acc_row / n_rollouts, acc_col / n_rollouts};
}

double exact_avg_reward(const MatrixGame& game, const StationaryPolicy& policy,
                        const OpponentSpec& opponent, long horizon,
                        int n_rollouts, std::uint64_t seed) {
  return average_rewards(game, ScriptedSpec{policy}, opponent, horizon,
                         n_rollouts, seed)
      .row;
}

SweepResult policy_iteration_sweep(const MatrixGame& game, OpponentMode mode,
                                   const Eigen::VectorXd& axis, long horizon,
                                   int n_rollouts, std::uint64_t seed) {
  AMG_CHECK(axis.size() >= 1);
  const auto policies = enumerate_stationary_policies(game, 0);
  const int n = static_cast<int>(axis.size());

  SweepResult result;
  result.axis = axis;
  result.best_avg_reward.resize(n, n);

  const auto cell = [&](int i, int j) {
    QLearnerSpec ql;
    ql.eps = mode == OpponentMode::kGreedy ? 0.0 : 0.05;
    ql.q_init = Eigen::MatrixXd(game.state_count(), game.n_actions[1]);
    ql.q_init.col(0).setConstant(axis[i]);
    ql.q_init.col(1).setConstant(axis[j]);
    double best = -std::numeric_limits<double>::infinity();
    for (size_t p = 0; p < policies.size(); ++p) {
      const std::uint64_t cell_seed =
          mix_seed(seed, static_cast<std::uint64_t>((i * n + j) * 1000 + p));
      best = std::max(best, exact_avg_reward(game, policies[p], ql, horizon,
                                             n_rollouts, cell_seed));
    }
    return best;
  };

  // Grid cells are independent; split by row across workers.
  const int n_workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), n));
  std::vector<std::future<void>> futures;
  std::atomic<int> next_row{0};
  for (int w = 0; w < n_workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&] {
      for (int i = next_row.fetch_add(1); i < n; i = next_row.fetch_add(1))
        for (int j = 0; j < n; ++j) result.best_avg_reward(i, j) = cell(i, j);
    }));
  }
  for (auto& f : futures) f.get();
  return result;
}

DeviationReport deviation_gain(const MatrixGame& game,
                               const StationaryPolicy& row_policy,
                               const StationaryPolicy& col_policy,
                               long horizon, int n_rollouts,
                               std::uint64_t seed) {
  const PairAverage current =
      average_rewards(game, ScriptedSpec{row_policy}, ScriptedSpec{col_policy},
                      horizon, n_rollouts, seed);

  DeviationReport report;
  report.best_row = row_policy;
  report.best_col = col_policy;

  for (const auto& alt : enumerate_stationary_policies(game, 0)) {
    const double value =
        average_rewards(game, ScriptedSpec{alt}, ScriptedSpec{col_policy},
                        horizon, n_rollouts, mix_seed(seed, 1))
            .row;
    if (value - current.row > report.gain_row) {
      report.gain_row = value - current.row;
      report.best_row = alt;
    }
  }
  for (const auto& alt : enumerate_stationary_policies(game, 1)) {
    const double value =
        average_rewards(game, ScriptedSpec{row_policy}, ScriptedSpec{alt},
                        horizon, n_rollouts, mix_seed(seed, 2))
            .col;
    if (value - current.col > report.gain_col) {
      report.gain_col = value - current.col;
      report.best_col = alt;
    }
  }
  return report;
}

}  // namespace amg
