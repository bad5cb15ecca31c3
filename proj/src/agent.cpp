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

#include "amg/agent.hpp"

#include <cmath>

namespace amg {

AgentKind parse_agent_kind(const std::string& name) {
  if (name == "further") return AgentKind::kFurther;
  if (name == "lili") return AgentKind::kLili;
  if (name == "masac") return AgentKind::kMasac;
  if (name == "qlearner") return AgentKind::kQLearner;
  if (name == "scripted") return AgentKind::kScripted;
  throw ConfigError("unknown agent kind '" + name +
                    "' (valid: further, lili, masac, qlearner, scripted)");
}

std::string to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kFurther: return "further";
    case AgentKind::kLili: return "lili";
    case AgentKind::kMasac: return "masac";
    case AgentKind::kQLearner: return "qlearner";
    case AgentKind::kScripted: return "scripted";
  }
  return "?";
}

AgentHyper preset_hyper(const std::string& game_name) {
  AgentHyper h;  // defaults hold the ibs table
  if (game_name == "ibs" || game_name == "ipd") return h;
  if (game_name == "ic") {
    h.critic_lr = 0.0005;
    h.gain_lr = 0.02;
    h.actor_lr = 0.0001;
    h.inference_lr = 0.0005;
    h.entropy_weight = 0.3;
    h.batch_size = 64;
    return h;
  }
  if (game_name == "imp") {
    h.critic_lr = 0.01;
    h.gain_lr = 0.05;
    h.actor_lr = 0.001;
    h.inference_lr = 0.01;
    h.entropy_weight = 0.35;
    h.batch_size = 64;
    return h;
  }
  throw ConfigError("no hyperparameter preset for game '" + game_name + "'");
}

Eigen::VectorXd NeuralAgent::policy_input(const Eigen::VectorXd& s_enc,
                                          const Eigen::VectorXd& z) const {
  Eigen::VectorXd in(state_dim + latent_dim);
  if (latent_dim == 0) return s_enc;
  in << s_enc, z;
  return in;
}

Eigen::VectorXd NeuralAgent::critic_input(const Eigen::VectorXd& s_enc,
                                          const Eigen::VectorXd& z,
                                          int a_opp) const {
  Eigen::VectorXd in = Eigen::VectorXd::Zero(state_dim + latent_dim + n_opp);
  in.head(state_dim) = s_enc;
  if (latent_dim > 0) in.segment(state_dim, latent_dim) = z;
  in[state_dim + latent_dim + a_opp] = 1.0;
  return in;
}

namespace {

std::vector<int> mlp_widths(int in, int out, const AgentHyper& h) {
  std::vector<int> w{in};
  for (int l = 0; l < h.hidden_layers; ++l) w.push_back(h.hidden);
  w.push_back(out);
  return w;
}

}  // namespace

NeuralAgent make_neural_agent(AgentKind kind, const MatrixGame& game,
                              int player, const AgentHyper& hyper, Rng& rng) {
  AMG_CHECK(kind == AgentKind::kFurther || kind == AgentKind::kLili ||
            kind == AgentKind::kMasac);
  NeuralAgent a;
  a.kind = kind;
  a.player = player;
  a.n_own = game.n_actions[player];
  a.n_opp = game.n_actions[1 - player];
  a.state_dim = game.state_count();
  a.latent_dim = kind == AgentKind::kMasac ? 0 : hyper.latent_dim;
  a.hyper = hyper;
  a.rho_min = game.min_payoff();
  a.rho_max = game.max_payoff();

  // Fixed seed stream per component keeps initialization reproducible and
  // independent of consumption order elsewhere.
  Rng r_pi = rng.child(1), r_c1 = rng.child(2), r_c2 = rng.child(3),
      r_enc = rng.child(4), r_dec = rng.child(5);
  const int pin = a.state_dim + a.latent_dim;
  const int cin = a.state_dim + a.latent_dim + a.n_opp;
  a.policy = DenseNet::random(mlp_widths(pin, a.n_own, hyper), r_pi);
  a.critic1 = DenseNet::random(mlp_widths(cin, a.n_own, hyper), r_c1);
  a.critic2 = DenseNet::random(mlp_widths(cin, a.n_own, hyper), r_c2);
  a.target1 = a.critic1;
  a.target2 = a.critic2;

  a.opt_policy = AdamState(a.policy.param_count(), hyper.actor_lr);
  a.opt_c1 = AdamState(a.critic1.param_count(), hyper.critic_lr);
  a.opt_c2 = AdamState(a.critic2.param_count(), hyper.critic_lr);

  if (a.has_model()) {
    const int tau_dim = transition_encoding_dim(game);
    a.encoder = DenseNet::random(
        mlp_widths(a.latent_dim + tau_dim, 2 * a.latent_dim, hyper), r_enc);
    a.decoder = DenseNet::random(
        mlp_widths(a.state_dim + a.latent_dim, a.n_opp, hyper), r_dec);
    a.opt_enc = AdamState(a.encoder.param_count(), hyper.inference_lr);
    a.opt_dec = AdamState(a.decoder.param_count(), hyper.inference_lr);
    a.belief = initial_belief(a.latent_dim);
  }

  a.buffer = ReplayBuffer(hyper.buffer_capacity);
  return a;
}

Eigen::VectorXd policy_probs(const NeuralAgent& agent,
                             const Eigen::VectorXd& s_enc,
                             const Eigen::VectorXd& z) {
  return softmax(agent.policy.forward(agent.policy_input(s_enc, z)));
}

int act(const NeuralAgent& agent, const Eigen::VectorXd& s_enc,
        const Eigen::VectorXd& z, ActMode mode, Rng& rng) {
  const Eigen::VectorXd probs = policy_probs(agent, s_enc, z);
  if (mode == ActMode::kTrain) return rng.categorical(probs);
  int best = 0;
  for (int i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = i;
  return best;
}

double soft_value(const DenseNet& policy, const DenseNet& critic1,
                  const DenseNet& critic2, const NeuralAgent& shape,
                  const Eigen::VectorXd& s_enc, const Eigen::VectorXd& z,
                  const Eigen::VectorXd& opp_dist, double alpha) {
  AMG_CHECK(opp_dist.size() == shape.n_opp);
  const Eigen::VectorXd probs =
      softmax(policy.forward(shape.policy_input(s_enc, z)));
  double v = 0.0;
  for (int b = 0; b < shape.n_opp; ++b) {
    if (opp_dist[b] == 0.0) continue;
    const Eigen::VectorXd in = shape.critic_input(s_enc, z, b);
    const Eigen::VectorXd qmin =
        critic1.forward(in).cwiseMin(critic2.forward(in));
    v += opp_dist[b] * probs.dot(qmin);
  }
  return v + alpha * entropy(probs);
}

double soft_value(const NeuralAgent& agent, const Eigen::VectorXd& s_enc,
                  const Eigen::VectorXd& z, const Eigen::VectorXd& opp_dist) {
  return soft_value(agent.policy, agent.critic1, agent.critic2, agent, s_enc,
                    z, opp_dist, agent.hyper.entropy_weight);
}

OppDistFn decoder_opp_dist(const NeuralAgent& agent) {
  AMG_CHECK_MSG(agent.has_model(), "no decoder on this agent");
  return [&agent](int state_idx, const Eigen::VectorXd& z) {
    return decode_probs(agent.decoder,
                        Eigen::VectorXd::Unit(agent.state_dim, state_idx), z);
  };
}

CriticLossResult critic_loss(const NeuralAgent& agent,
                             std::span<const ReplayRecord* const> batch,
                             const CriticObjective& objective,
                             const OppDistFn& opp_dist) {
  const int n = static_cast<int>(batch.size());
  AMG_CHECK_MSG(n >= 1, "critic batch must be nonempty");
  CriticLossResult out;
  out.grad1 = Eigen::VectorXd::Zero(agent.critic1.param_count());
  out.grad2 = Eigen::VectorXd::Zero(agent.critic2.param_count());

  Trace tr1, tr2;
  for (const ReplayRecord* rec : batch) {
    const Eigen::VectorXd s_next =
        Eigen::VectorXd::Unit(agent.state_dim, rec->next_idx);
    const Eigen::VectorXd p_opp = opp_dist(rec->next_idx, rec->z_next);
    const double v_next =
        soft_value(agent.policy, agent.target1, agent.target2, agent, s_next,
                   rec->z_next, p_opp, agent.hyper.entropy_weight);
    const double y = objective.average_reward
                         ? rec->reward - agent.rho + v_next
                         : rec->reward + objective.gamma * v_next;

    const Eigen::VectorXd s_enc =
        Eigen::VectorXd::Unit(agent.state_dim, rec->state_idx);
    const Eigen::VectorXd in =
        agent.critic_input(s_enc, rec->z, rec->other_action);
    const Eigen::VectorXd q1 = agent.critic1.forward(in, tr1);
    const Eigen::VectorXd q2 = agent.critic2.forward(in, tr2);
    const double e1 = y - q1[rec->own_action];
    const double e2 = y - q2[rec->own_action];
    out.loss += (e1 * e1 + e2 * e2) / (2.0 * n);

    Eigen::VectorXd dq = Eigen::VectorXd::Zero(agent.n_own);
    dq[rec->own_action] = -e1 / n;
    agent.critic1.backward(tr1, dq, out.grad1);
    dq[rec->own_action] = -e2 / n;
    agent.critic2.backward(tr2, dq, out.grad2);
    if (objective.average_reward) out.grad_rho += -(e1 + e2) / n;
  }
  return out;
}

PolicyLossResult policy_loss(const NeuralAgent& agent,
                             std::span<const ReplayRecord* const> batch) {
  const int n = static_cast<int>(batch.size());
  AMG_CHECK_MSG(n >= 1, "policy batch must be nonempty");
  PolicyLossResult out;
  out.grad = Eigen::VectorXd::Zero(agent.policy.param_count());
  const double alpha = agent.hyper.entropy_weight;

  Trace tr;
  for (const ReplayRecord* rec : batch) {
    const Eigen::VectorXd s_enc =
        Eigen::VectorXd::Unit(agent.state_dim, rec->state_idx);
    const Eigen::VectorXd logits =
        agent.policy.forward(agent.policy_input(s_enc, rec->z), tr);
    const Eigen::VectorXd lsm = log_softmax(logits);
    const Eigen::VectorXd probs = lsm.array().exp();

    const Eigen::VectorXd in =
        agent.critic_input(s_enc, rec->z, rec->other_action);
    const Eigen::VectorXd qmin =
        agent.critic1.forward(in).cwiseMin(agent.critic2.forward(in));

    const double f = probs.dot(qmin);
    const double h = entropy(probs);
    out.loss += -(f + alpha * h) / n;

    // d(-f - alpha H)/dlogits, critics constant.
    Eigen::VectorXd dlogits(agent.n_own);
    for (int k = 0; k < agent.n_own; ++k)
      dlogits[k] =
          (-probs[k] * (qmin[k] - f) + alpha * probs[k] * (lsm[k] + h)) / n;
    agent.policy.backward(tr, dlogits, out.grad);
  }
  return out;
}

int TabularQLearner::greedy_action(int state_idx) const {
  int best = 0;
  for (int a = 1; a < q.cols(); ++a)
    if (q(state_idx, a) > q(state_idx, best)) best = a;
  return best;
}

int TabularQLearner::act(int state_idx, Rng& rng) const {
  if (eps > 0.0 && rng.uniform() < eps)
    return rng.uniform_int(static_cast<int>(q.cols()));
  return greedy_action(state_idx);
}

Eigen::VectorXd TabularQLearner::action_dist(int state_idx) const {
  const int n = static_cast<int>(q.cols());
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, eps / n);
  dist[greedy_action(state_idx)] += 1.0 - eps;
  return dist;
}

void q_update(TabularQLearner& ql, int state_idx, int action, double reward,
              int next_idx) {
  const double target = reward + ql.gamma * ql.q.row(next_idx).maxCoeff();
  ql.q(state_idx, action) += ql.lr * (target - ql.q(state_idx, action));
}

}  // namespace amg
