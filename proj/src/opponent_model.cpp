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

#include "amg/opponent_model.hpp"

#include <cmath>

namespace amg {
namespace {

Eigen::VectorXd concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

// 1 inside the clamp interval, 0 where the raw value was clipped.
Eigen::ArrayXd clamp_mask(const Eigen::VectorXd& raw) {
  return ((raw.array() > kLogStdMin) && (raw.array() < kLogStdMax))
      .cast<double>();
}

}  // namespace

LatentBelief initial_belief(int latent_dim) {
  AMG_CHECK(latent_dim > 0);
  return {DiagGaussian::standard(latent_dim),
          Eigen::VectorXd::Zero(latent_dim)};
}

int transition_encoding_dim(const MatrixGame& game) {
  return 2 * game.state_count() + game.n_actions[0] + game.n_actions[1] + 1;
}

Eigen::VectorXd encode_transition(const MatrixGame& game,
                                  const Transition& t) {
  const int s = game.state_count();
  // Actions are encoded own-first; for the column player "own" is its own
  // alphabet, which matches the agent's encoder layout.
  Eigen::VectorXd enc = Eigen::VectorXd::Zero(transition_encoding_dim(game));
  enc[state_index(game, t.state)] = 1.0;
  enc[s + t.own_action] = 1.0;
  enc[s + game.n_actions[0] + t.other_action] = 1.0;
  enc[s + game.n_actions[0] + game.n_actions[1]] = t.reward;
  enc[s + game.n_actions[0] + game.n_actions[1] + 1 +
      state_index(game, t.next)] = 1.0;
  return enc;
}

LatentBelief encode_step(const DenseNet& encoder, const LatentBelief& prev,
                         const Eigen::VectorXd& tau,
                         const Eigen::VectorXd& noise) {
  const int z = prev.sample.size();
  AMG_CHECK_MSG(encoder.output_dim() == 2 * z, "encoder head dimension");
  AMG_CHECK_MSG(encoder.input_dim() == z + tau.size(),
                "encoder input dimension");
  const Eigen::VectorXd out = encoder.forward(concat(prev.sample, tau));
  DiagGaussian dist(out.head(z), out.tail(z));
  Eigen::VectorXd sample = sample_reparam(dist, noise);
  return {std::move(dist), std::move(sample)};
}

double decode_logprob(const DenseNet& decoder, const Eigen::VectorXd& s_enc,
                      const Eigen::VectorXd& z, int action) {
  const Eigen::VectorXd logits = decoder.forward(concat(s_enc, z));
  AMG_CHECK(action >= 0 && action < logits.size());
  return log_softmax(logits)[action];
}

Eigen::VectorXd decode_probs(const DenseNet& decoder,
                             const Eigen::VectorXd& s_enc,
                             const Eigen::VectorXd& z) {
  return softmax(decoder.forward(concat(s_enc, z)));
}

double elbo_loss(const DenseNet& encoder, const DenseNet& decoder,
                 std::span<const WindowItem> window,
                 const LatentBelief& carried, const Eigen::MatrixXd& noise,
                 double kl_weight, Eigen::VectorXd* enc_grad,
                 Eigen::VectorXd* dec_grad) {
  const int m = static_cast<int>(window.size());
  AMG_CHECK_MSG(m >= 1, "elbo window must be nonempty");
  const int z = carried.sample.size();
  AMG_CHECK(noise.rows() == z && noise.cols() >= m);
  const int s_dim = static_cast<int>(window[0].state_enc.size());
  AMG_CHECK(encoder.output_dim() == 2 * z &&
            decoder.input_dim() == s_dim + z);

  // Workspaces persist per thread; resizing to an unchanged shape is free,
  // which keeps the per-step window update allocation-light.
  thread_local BatchTrace enc_bt, dec_bt;
  thread_local Eigen::MatrixXd sample, mean, log_std, raw_log_std, sigma;
  thread_local Eigen::MatrixXd dlogits, dec_dx, g_sample;
  sample.resize(z, m + 1);
  mean.resize(z, m + 1);
  log_std.resize(z, m + 1);
  raw_log_std.resize(z, m + 1);
  sigma.resize(z, m + 1);
  mean.col(0) = carried.dist.mean;
  log_std.col(0) = carried.dist.log_std;
  sigma.col(0) = log_std.col(0).array().exp();
  sample.col(0) = carried.sample;

  // Forward replay of the belief chain. The encoder runs column by column
  // (each input embeds the previous draw); the decoder batches afterwards.
  encoder.batch_init(enc_bt, m);
  for (int k = 0; k < m; ++k) {
    enc_bt.acts[0].col(k).head(z) = sample.col(k);
    enc_bt.acts[0].col(k).tail(window[k].tau.size()) = window[k].tau;
    encoder.forward_col(enc_bt, k);
    const auto out = enc_bt.acts.back().col(k);
    mean.col(k + 1) = out.head(z);
    raw_log_std.col(k + 1) = out.tail(z);
    log_std.col(k + 1) =
        raw_log_std.col(k + 1).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
    sigma.col(k + 1) = log_std.col(k + 1).array().exp();
    sample.col(k + 1) =
        mean.col(k + 1).array() + sigma.col(k + 1).array() * noise.col(k).array();
  }

  decoder.batch_init(dec_bt, m);
  for (int k = 0; k < m; ++k) {
    dec_bt.acts[0].col(k).head(s_dim) = window[k].state_enc;
    dec_bt.acts[0].col(k).tail(z) = sample.col(k);
  }
  decoder.forward_all(dec_bt);

  // KL(posterior(k+1) || prior(k)) per window element, in closed form.
  const auto kl_at = [&](int k) {
    const Eigen::ArrayXd var_p = sigma.col(k + 1).array().square();
    const Eigen::ArrayXd var_q = sigma.col(k).array().square();
    const Eigen::ArrayXd diff = (mean.col(k + 1) - mean.col(k)).array();
    return (log_std.col(k).array() - log_std.col(k + 1).array() +
            (var_p + diff.square()) / (2.0 * var_q) - 0.5)
        .sum();
  };

  double loss = 0.0;
  dlogits.resize(decoder.output_dim(), m);
  for (int k = 0; k < m; ++k) {
    const Eigen::VectorXd lsm = log_softmax(dec_bt.acts.back().col(k));
    loss += kl_weight * kl_at(k) - lsm[window[k].other_action];
    // d(-log p[a])/dlogits = probs - onehot(a)
    dlogits.col(k) = lsm.array().exp();
    dlogits(window[k].other_action, k) -= 1.0;
  }

  if (enc_grad == nullptr && dec_grad == nullptr) return loss;
  AMG_CHECK(enc_grad != nullptr && dec_grad != nullptr);
  AMG_CHECK(enc_grad->size() == encoder.param_count() &&
            dec_grad->size() == decoder.param_count());

  decoder.backward_all(dec_bt, dlogits, &dec_dx);
  decoder.accumulate_grads(dec_bt, *dec_grad);

  // Reverse sweep over the belief chain. g_mean/g_log_std accumulate
  // gradients with respect to each belief's clamped parameters, g_sample
  // with respect to its draw. Draw k feeds the decoder at item k (batched
  // above) and the encoder input at item k.
  g_sample.resize(z, m + 1);
  g_sample.setZero();
  for (int k = 1; k < m; ++k) g_sample.col(k) = dec_dx.col(k).tail(z);
  Eigen::VectorXd g_mean_next = Eigen::VectorXd::Zero(z);
  Eigen::VectorXd g_log_std_next = Eigen::VectorXd::Zero(z);
  Eigen::VectorXd dy(2 * z);

  for (int k = m - 1; k >= 0; --k) {
    // Sample path into the posterior's parameters.
    g_mean_next += g_sample.col(k + 1);
    g_log_std_next.array() += g_sample.col(k + 1).array() *
                              sigma.col(k + 1).array() * noise.col(k).array();

    // KL(posterior(k+1) || prior(k)) contributions to both sides.
    const Eigen::ArrayXd var_p = sigma.col(k + 1).array().square();
    const Eigen::ArrayXd var_q = sigma.col(k).array().square();
    const Eigen::ArrayXd diff = (mean.col(k + 1) - mean.col(k)).array();
    g_mean_next.array() += kl_weight * diff / var_q;
    g_log_std_next.array() += kl_weight * (var_p / var_q - 1.0);

    // Through the encoder (log-std head masked by the clamp).
    dy.head(z) = g_mean_next;
    dy.tail(z) = g_log_std_next.array() * clamp_mask(raw_log_std.col(k + 1));
    const Eigen::VectorXd dx_enc = encoder.backward_col(enc_bt, k, dy);
    g_sample.col(k) += dx_enc.head(z);

    // Prior-side KL gradients seed the next (earlier) belief.
    g_mean_next = (-kl_weight * diff / var_q).matrix();
    g_log_std_next =
        (kl_weight * (1.0 - (var_p + diff.square()) / var_q)).matrix();
  }
  encoder.accumulate_grads(enc_bt, *enc_grad);
  return loss;
}

}  // namespace amg
