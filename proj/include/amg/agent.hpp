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

#ifndef AMG_AGENT_HPP_
#define AMG_AGENT_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amg/matrix_game.hpp"
#include "amg/net.hpp"
#include "amg/opponent_model.hpp"
#include "amg/replay.hpp"

namespace amg {

enum class AgentKind { kFurther, kLili, kMasac, kQLearner, kScripted };

AgentKind parse_agent_kind(const std::string& name);
std::string to_string(AgentKind kind);

// Per-agent hyperparameters. Defaults are the ibs preset; see preset_hyper.
struct AgentHyper {
  double critic_lr = 0.002;
  double gain_lr = 0.02;
  double actor_lr = 0.0005;
  double inference_lr = 0.002;
  double entropy_weight = 0.4;
  int latent_dim = 5;
  double gamma = 0.99;
  int batch_size = 256;
  double tau_q = 0.05;
  int buffer_capacity = 4096;
  int warmup_steps = 256;
  int hidden = 64;
  int hidden_layers = 2;
  int elbo_every = 1;  // env steps between inference gradient steps
};

// Published per-game hyperparameter tables (ipd reuses the ibs values).
AgentHyper preset_hyper(const std::string& game_name);

// Soft actor-critic bundle over (state, latent): policy, twin critics with
// targets, a learnable average-reward gain, a replay buffer, and (except for
// masac) the variational opponent model.
struct NeuralAgent {
  AgentKind kind = AgentKind::kFurther;
  int player = 0;  // 0 = row, 1 = column
  int n_own = 2, n_opp = 2, state_dim = 5, latent_dim = 5;
  AgentHyper hyper;

  DenseNet policy;             // (s_enc, z) -> logits over own actions
  DenseNet critic1, critic2;   // (s_enc, z, onehot a_opp) -> q per own action
  DenseNet target1, target2;
  DenseNet encoder, decoder;   // empty for masac

  AdamState opt_policy, opt_c1, opt_c2, opt_enc, opt_dec;

  double rho = 0.0;
  double rho_min = 0.0, rho_max = 0.0;  // clip range (payoff bounds)

  ReplayBuffer buffer{1};
  LatentBelief belief;

  double last_critic_loss = 0.0, last_policy_loss = 0.0, last_elbo_loss = 0.0;

  bool has_model() const { return kind != AgentKind::kMasac; }
  bool average_reward() const { return kind == AgentKind::kFurther; }

  Eigen::VectorXd policy_input(const Eigen::VectorXd& s_enc,
                               const Eigen::VectorXd& z) const;
  Eigen::VectorXd critic_input(const Eigen::VectorXd& s_enc,
                               const Eigen::VectorXd& z, int a_opp) const;
};

NeuralAgent make_neural_agent(AgentKind kind, const MatrixGame& game,
                              int player, const AgentHyper& hyper, Rng& rng);

enum class ActMode { kTrain, kEval };

// Action-probability head of the policy at (state, latent).
Eigen::VectorXd policy_probs(const NeuralAgent& agent,
                             const Eigen::VectorXd& s_enc,
                             const Eigen::VectorXd& z);

// Samples in train mode; takes the argmax (ties to the lowest index) in
// eval mode.
int act(const NeuralAgent& agent, const Eigen::VectorXd& s_enc,
        const Eigen::VectorXd& z, ActMode mode, Rng& rng);

// Entropy-regularized state value under exact sums over both discrete action
// sets: sum_a pi(a) sum_b p(b) min(q1, q2)(s, z, a, b) + alpha * H(pi).
double soft_value(const DenseNet& policy, const DenseNet& critic1,
                  const DenseNet& critic2, const NeuralAgent& shape,
                  const Eigen::VectorXd& s_enc, const Eigen::VectorXd& z,
                  const Eigen::VectorXd& opp_dist, double alpha);

// Convenience overload on the live critics.
double soft_value(const NeuralAgent& agent, const Eigen::VectorXd& s_enc,
                  const Eigen::VectorXd& z, const Eigen::VectorXd& opp_dist);

// Supplies the opponent's action distribution at a (next state, next latent)
// pair when forming critic targets.
using OppDistFn =
    std::function<Eigen::VectorXd(int state_idx, const Eigen::VectorXd& z)>;

// Decoder-backed OppDistFn (the default for agents with a model).
OppDistFn decoder_opp_dist(const NeuralAgent& agent);

struct CriticObjective {
  bool average_reward = true;
  double gamma = 0.99;  // used when average_reward is false

  static CriticObjective avg() { return {true, 0.0}; }
  static CriticObjective discounted(double g) { return {false, g}; }
};

struct CriticLossResult {
  double loss = 0.0;
  Eigen::VectorXd grad1, grad2;
  double grad_rho = 0.0;
};

// Twin soft Bellman residual over a batch. Targets come from the target
// critics (stop-gradient); `opp_dist` supplies p(a_opp) inside the target's
// soft value. The gain gradient flows only through the -rho term of the
// average-reward target.
CriticLossResult critic_loss(const NeuralAgent& agent,
                             std::span<const ReplayRecord* const> batch,
                             const CriticObjective& objective,
                             const OppDistFn& opp_dist);

struct PolicyLossResult {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

// Negative soft policy objective; critics are treated as constants and the
// opponent action is the one stored in each batch record.
PolicyLossResult policy_loss(const NeuralAgent& agent,
                             std::span<const ReplayRecord* const> batch);

// Tabular q-learner over the game's state enumeration.
struct TabularQLearner {
  Eigen::MatrixXd q;  // state x action
  double lr = 0.5;
  double gamma = 0.9;
  double eps = 0.05;
  int player = 1;

  TabularQLearner() = default;
  TabularQLearner(int n_states, int n_actions, double lr, double gamma,
                  double eps)
      : q(Eigen::MatrixXd::Zero(n_states, n_actions)),
        lr(lr),
        gamma(gamma),
        eps(eps) {}

  int greedy_action(int state_idx) const;           // ties to lowest index
  int act(int state_idx, Rng& rng) const;           // eps-greedy
  Eigen::VectorXd action_dist(int state_idx) const; // eps-greedy distribution
};

// One-step q-learning update.
void q_update(TabularQLearner& ql, int state_idx, int action, double reward,
              int next_idx);

}  // namespace amg

#endif  // AMG_AGENT_HPP_
