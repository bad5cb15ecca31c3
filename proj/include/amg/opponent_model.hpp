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

#ifndef AMG_OPPONENT_MODEL_HPP_
#define AMG_OPPONENT_MODEL_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "amg/gaussian.hpp"
#include "amg/matrix_game.hpp"
#include "amg/net.hpp"

namespace amg {

// Belief over the other agent's latent strategy: the distribution the
// encoder emitted plus the reparameterized draw fed downstream.
struct LatentBelief {
  DiagGaussian dist;
  Eigen::VectorXd sample;
};

// Standard-normal belief with the mean as its sample.
LatentBelief initial_belief(int latent_dim);

// Width of the flat transition encoding: one-hot state, one-hot own action,
// one-hot other action, reward scalar, one-hot next state.
int transition_encoding_dim(const MatrixGame& game);

Eigen::VectorXd encode_transition(const MatrixGame& game, const Transition& t);

// One belief-propagation step: the encoder maps (previous sample, transition
// encoding) to the next Gaussian; the sample is reparameterized with `noise`.
// Markov by construction: nothing older than `prev` is consumed.
LatentBelief encode_step(const DenseNet& encoder, const LatentBelief& prev,
                         const Eigen::VectorXd& tau,
                         const Eigen::VectorXd& noise);

// Log-probability of the other agent's action under the decoder's
// categorical head at (state encoding, latent).
double decode_logprob(const DenseNet& decoder, const Eigen::VectorXd& s_enc,
                      const Eigen::VectorXd& z, int action);

// Full predicted action distribution.
Eigen::VectorXd decode_probs(const DenseNet& decoder,
                             const Eigen::VectorXd& s_enc,
                             const Eigen::VectorXd& z);

// One element of the sequential training window.
struct WindowItem {
  Eigen::VectorXd tau;        // transition encoding
  Eigen::VectorXd state_enc;  // one-hot state where the action was observed
  int other_action = 0;
};

// Negative evidence lower bound over a window of consecutive transitions.
//
// The belief chain is replayed from `carried` (the belief stored alongside
// the window's oldest transition): at each element the decoder reconstructs
// the observed opponent action from the pre-transition belief sample, the
// encoder produces the next posterior, and the KL term penalizes that
// posterior against the previous one. `noise` holds one column of
// reparameterization noise per window element. When `enc_grad`/`dec_grad`
// are non-null they receive exact reverse-mode gradients, with gradient
// flowing through the sample chain across the whole window.
double elbo_loss(const DenseNet& encoder, const DenseNet& decoder,
                 std::span<const WindowItem> window,
                 const LatentBelief& carried, const Eigen::MatrixXd& noise,
                 double kl_weight, Eigen::VectorXd* enc_grad,
                 Eigen::VectorXd* dec_grad);

}  // namespace amg

#endif  // AMG_OPPONENT_MODEL_HPP_
