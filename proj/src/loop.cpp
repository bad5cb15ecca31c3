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

#include "amg/loop.hpp"

#include <algorithm>

namespace amg {
namespace {

int select_action(AnyAgent& agent, const MatrixGame& game,
                  const GameState& state, long t, Rng& rng) {
  const int s_idx = state_index(game, state);
  if (auto* neural = std::get_if<NeuralAgent>(&agent)) {
    if (t < neural->hyper.warmup_steps) return rng.uniform_int(neural->n_own);
    return act(*neural, Eigen::VectorXd::Unit(neural->state_dim, s_idx),
               neural->belief.sample, ActMode::kTrain, rng);
  }
  if (auto* ql = std::get_if<TabularQLearner>(&agent))
    return ql->act(s_idx, rng);
  return std::get<ScriptedAgent>(agent).action_by_state[s_idx];
}

Transition own_view(const std::pair<Transition, Transition>& both,
                    int player) {
  return player == 0 ? both.first : both.second;
}

void observe(NeuralAgent& agent, const MatrixGame& game, const Transition& tr,
             Rng& rng) {
  LatentBelief next = agent.belief;
  if (agent.has_model()) {
    next = encode_step(agent.encoder, agent.belief,
                       encode_transition(game, tr),
                       rng.normal_vec(agent.latent_dim));
  }
  ReplayRecord rec;
  rec.state_idx = state_index(game, tr.state);
  rec.next_idx = state_index(game, tr.next);
  rec.own_action = tr.own_action;
  rec.other_action = tr.other_action;
  rec.reward = tr.reward;
  rec.z = agent.belief.sample;
  rec.z_next = next.sample;
  rec.belief = agent.belief.dist;
  agent.buffer.push(std::move(rec));
  agent.belief = std::move(next);
}

}  // namespace

OppDistFn true_policy_dist(const AnyAgent& other, const MatrixGame& game) {
  if (const auto* neural = std::get_if<NeuralAgent>(&other)) {
    return [neural](int state_idx, const Eigen::VectorXd&) {
      return policy_probs(*neural,
                          Eigen::VectorXd::Unit(neural->state_dim, state_idx),
                          neural->belief.sample);
    };
  }
  if (const auto* ql = std::get_if<TabularQLearner>(&other)) {
    return [ql](int state_idx, const Eigen::VectorXd&) {
      return ql->action_dist(state_idx);
    };
  }
  const auto* scripted = &std::get<ScriptedAgent>(other);
  const int n = game.n_actions[scripted->player];
  return [scripted, n](int state_idx, const Eigen::VectorXd&) {
    return Eigen::VectorXd(Eigen::VectorXd::Unit(
        n, scripted->action_by_state[state_idx]));
  };
}

void update_neural_agent(NeuralAgent& self, const AnyAgent& other,
                         const MatrixGame& game, long t, Rng& rng) {
  if (t < self.hyper.warmup_steps || self.buffer.size() == 0) return;

  // Policy and critics train on the most recent transition only; the replay
  // window feeds the inference loss below.
  const ReplayRecord* latest = &self.buffer.back();
  std::span<const ReplayRecord* const> batch(&latest, 1);

  const CriticObjective objective =
      self.average_reward() ? CriticObjective::avg()
                            : CriticObjective::discounted(self.hyper.gamma);
  const OppDistFn opp = self.kind == AgentKind::kMasac
                            ? true_policy_dist(other, game)
                            : decoder_opp_dist(self);

  CriticLossResult cl = critic_loss(self, batch, objective, opp);
  adam_step(self.opt_c1, self.critic1.params(), cl.grad1);
  adam_step(self.opt_c2, self.critic2.params(), cl.grad2);
  if (self.average_reward()) {
    self.rho -= self.hyper.gain_lr * cl.grad_rho;
    self.rho = std::clamp(self.rho, self.rho_min, self.rho_max);
  }
  self.last_critic_loss = cl.loss;

  PolicyLossResult pl = policy_loss(self, batch);
  adam_step(self.opt_policy, self.policy.params(), pl.grad);
  self.last_policy_loss = pl.loss;

  if (self.has_model() && t % self.hyper.elbo_every == 0) {
    const auto window_recs =
        self.buffer.last(std::min(self.hyper.batch_size, self.buffer.size()));
    std::vector<WindowItem> window(window_recs.size());
    for (size_t k = 0; k < window_recs.size(); ++k) {
      const ReplayRecord& r = *window_recs[k];
      Transition tr{state_from_index(game, r.state_idx), r.own_action,
                    r.other_action, r.reward,
                    state_from_index(game, r.next_idx)};
      window[k].tau = encode_transition(game, tr);
      window[k].state_enc = Eigen::VectorXd::Unit(self.state_dim, r.state_idx);
      window[k].other_action = r.other_action;
    }
    const LatentBelief carried{window_recs.front()->belief,
                               window_recs.front()->z};
    Eigen::MatrixXd noise(self.latent_dim, window.size());
    for (int c = 0; c < noise.cols(); ++c)
      noise.col(c) = rng.normal_vec(self.latent_dim);
    Eigen::VectorXd g_enc = Eigen::VectorXd::Zero(self.encoder.param_count());
    Eigen::VectorXd g_dec = Eigen::VectorXd::Zero(self.decoder.param_count());
    self.last_elbo_loss = elbo_loss(self.encoder, self.decoder, window,
                                    carried, noise, 0.01, &g_enc, &g_dec);
    adam_step(self.opt_enc, self.encoder.params(), g_enc);
    adam_step(self.opt_dec, self.decoder.params(), g_dec);
  }

  const double tau_q = self.hyper.tau_q;
  self.target1.params() =
      tau_q * self.critic1.params() + (1.0 - tau_q) * self.target1.params();
  self.target2.params() =
      tau_q * self.critic2.params() + (1.0 - tau_q) * self.target2.params();
}

void masac_step(NeuralAgent& agent_i, NeuralAgent& agent_j,
                const MatrixGame& game, long t, Rng& rng_i, Rng& rng_j) {
  AMG_CHECK(agent_i.kind == AgentKind::kMasac &&
            agent_j.kind == AgentKind::kMasac);
  // Evaluate both updates against the other's pre-update policy.
  NeuralAgent j_before = agent_j;
  AnyAgent other_j(std::move(j_before));
  AnyAgent other_i(agent_i);
  update_neural_agent(agent_i, other_j, game, t, rng_i);
  update_neural_agent(agent_j, other_i, game, t, rng_j);
}

StepMetrics further_loop_step(World& world, AnyAgent& row, AnyAgent& col) {
  const int a_row =
      select_action(row, world.game, world.state, world.t, world.rng_row);
  const int a_col =
      select_action(col, world.game, world.state, world.t, world.rng_col);
  const auto both = step(world.game, world.state, a_row, a_col);

  for (auto* side : {&row, &col}) {
    const int player = side == &row ? 0 : 1;
    Rng& rng = player == 0 ? world.rng_row : world.rng_col;
    const Transition tr = own_view(both, player);
    if (auto* neural = std::get_if<NeuralAgent>(side)) {
      observe(*neural, world.game, tr, rng);
    } else if (auto* ql = std::get_if<TabularQLearner>(side)) {
      q_update(*ql, state_index(world.game, tr.state), tr.own_action,
               tr.reward, state_index(world.game, tr.next));
    }
  }

  if (auto* neural = std::get_if<NeuralAgent>(&row))
    update_neural_agent(*neural, col, world.game, world.t, world.rng_row);
  if (auto* neural = std::get_if<NeuralAgent>(&col))
    update_neural_agent(*neural, row, world.game, world.t, world.rng_col);

  StepMetrics m;
  m.r_row = both.first.reward;
  m.r_col = both.second.reward;
  if (const auto* neural = std::get_if<NeuralAgent>(&row)) {
    m.rho_row = neural->rho;
    m.critic_loss = neural->last_critic_loss;
    m.policy_loss = neural->last_policy_loss;
    m.elbo_loss = neural->last_elbo_loss;
  }
  if (const auto* neural = std::get_if<NeuralAgent>(&col)) {
    m.rho_col = neural->rho;
    if (!std::holds_alternative<NeuralAgent>(row)) {
      m.critic_loss = neural->last_critic_loss;
      m.policy_loss = neural->last_policy_loss;
      m.elbo_loss = neural->last_elbo_loss;
    }
  }

  world.state = both.first.next;
  world.t += 1;
  return m;
}

}  // namespace amg
