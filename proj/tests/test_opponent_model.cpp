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

#include <doctest.h>

#include <cmath>
#include <functional>

#include "amg/matrix_game.hpp"
#include "amg/net.hpp"
#include "amg/opponent_model.hpp"
#include "test_util.hpp"

using namespace amg;

namespace {

// Inference-only training rig: the row agent plays uniformly at random, the
// column opponent follows a scripted rule, and the encoder/decoder train on
// the most recent `window` transitions each step.
struct InferenceRig {
  MatrixGame game = make_game("ibs");
  int latent = 5;
  DenseNet encoder, decoder;
  AdamState opt_enc, opt_dec;
  LatentBelief belief;
  std::vector<WindowItem> items;
  std::vector<LatentBelief> beliefs;  // belief at entry of items[k]
  Rng rng{99};
  double kl_weight = 0.01;
  int window = 32;

  explicit InferenceRig(std::uint64_t seed, double kl_w = 0.01,
                        double lr = 0.002)
      : rng(seed), kl_weight(kl_w) {
    Rng enc_rng = rng.child(1), dec_rng = rng.child(2);
    const int tau_dim = transition_encoding_dim(game);
    encoder = DenseNet::random({latent + tau_dim, 64, 64, 2 * latent}, enc_rng);
    decoder = DenseNet::random({game.state_count() + latent, 64, 64, 2},
                               dec_rng);
    opt_enc = AdamState(encoder.param_count(), lr);
    opt_dec = AdamState(decoder.param_count(), lr);
    belief = initial_belief(latent);
  }

  // One environment step with opponent action a_col; returns the elbo loss
  // of the training step (0 before the window has content).
  double env_step(const GameState& state, int a_col, GameState* next_state) {
    const int a_row = rng.uniform_int(2);
    const auto both = step(game, state, a_row, a_col);
    const Transition& tr = both.first;

    WindowItem item;
    item.tau = encode_transition(game, tr);
    item.state_enc = encode_state(game, tr.state);
    item.other_action = tr.other_action;
    items.push_back(std::move(item));
    beliefs.push_back(belief);
    belief = encode_step(encoder, belief, encode_transition(game, tr),
                         rng.normal_vec(latent));

    const int m = std::min<int>(window, items.size());
    const size_t start = items.size() - m;
    std::span<const WindowItem> win(items.data() + start, m);
    Eigen::MatrixXd noise(latent, m);
    for (int c = 0; c < m; ++c) noise.col(c) = rng.normal_vec(latent);
    Eigen::VectorXd g_enc = Eigen::VectorXd::Zero(encoder.param_count());
    Eigen::VectorXd g_dec = Eigen::VectorXd::Zero(decoder.param_count());
    const double loss = elbo_loss(encoder, decoder, win, beliefs[start], noise,
                                  kl_weight, &g_enc, &g_dec);
    adam_step(opt_enc, encoder.params(), g_enc);
    adam_step(opt_dec, decoder.params(), g_dec);
    *next_state = tr.next;
    return loss;
  }
};

}  // namespace

TEST_CASE("initial belief is the standard normal prior") {
  const LatentBelief b = initial_belief(5);
  CHECK(b.dist.mean.isZero());
  CHECK(b.dist.log_std.isZero());
  CHECK(b.sample.isZero());
  CHECK(diag_gaussian_kl(b.dist, DiagGaussian::standard(5)) == 0.0);

  // Pure function of the dimension.
  const LatentBelief again = initial_belief(5);
  CHECK((again.sample - b.sample).norm() == 0.0);
}

TEST_CASE("encode_step basics") {
  const MatrixGame game = make_game("ibs");
  const int tau_dim = transition_encoding_dim(game);
  CHECK(tau_dim == 2 * 5 + 2 + 2 + 1);

  // Zero-initialized encoder gives the standard-normal posterior whatever
  // the input.
  DenseNet zero_enc({5 + tau_dim, 8, 10});
  const LatentBelief prev = initial_belief(5);
  const auto tr = step(game, GameState::initial(), 0, 1).first;
  const Eigen::VectorXd tau = encode_transition(game, tr);
  const LatentBelief post =
      encode_step(zero_enc, prev, tau, Eigen::VectorXd::Zero(5));
  CHECK(post.dist.mean.isZero());
  CHECK(post.dist.log_std.isZero());
  CHECK((post.sample - post.dist.mean).norm() == 0.0);  // zero noise -> mean

  // Markov: the belief depends only on (previous belief, transition).
  Rng rng(4);
  DenseNet enc = DenseNet::random({5 + tau_dim, 16, 10}, rng);
  const Eigen::VectorXd noise = rng.normal_vec(5);
  LatentBelief a = initial_belief(5);
  for (int i = 0; i < 7; ++i)
    a = encode_step(enc, a, tau, Eigen::VectorXd::Constant(5, 0.1));
  const LatentBelief direct =
      encode_step(enc, a, tau, noise);  // one more from the reached belief
  const LatentBelief replay = encode_step(enc, a, tau, noise);
  CHECK((direct.dist.mean - replay.dist.mean).norm() == 0.0);
  CHECK((direct.sample - replay.sample).norm() == 0.0);
}

TEST_CASE("decode_logprob") {
  const MatrixGame game = make_game("ibs");
  DenseNet zero_dec({5 + 5, 8, 2});
  const Eigen::VectorXd s_enc = encode_state(game, GameState::initial());
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(5);
  CHECK(decode_logprob(zero_dec, s_enc, z, 0) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(decode_logprob(zero_dec, s_enc, z, 1) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));

  Rng rng(11);
  DenseNet dec = DenseNet::random({10, 16, 2}, rng);
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    const double lp = decode_logprob(dec, s_enc, rng.normal_vec(5), a);
    CHECK(lp <= 0.0);
  }
  const Eigen::VectorXd z2 = rng.normal_vec(5);
  for (int a = 0; a < 2; ++a)
    total += std::exp(decode_logprob(dec, s_enc, z2, a));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("elbo single transition closed form under zero nets") {
  const MatrixGame game = make_game("ibs");
  const int tau_dim = transition_encoding_dim(game);
  DenseNet enc({5 + tau_dim, 8, 10});
  DenseNet dec({10, 8, 2});

  const auto tr = step(game, GameState::initial(), 0, 1).first;
  WindowItem item{encode_transition(game, tr), encode_state(game, tr.state),
                  tr.other_action};
  const std::vector<WindowItem> window{item};

  // Carried prior away from the standard normal so the KL term is nonzero.
  Eigen::VectorXd mean = Eigen::VectorXd::Constant(5, 0.3);
  Eigen::VectorXd log_std = Eigen::VectorXd::Constant(5, -0.2);
  const LatentBelief carried{DiagGaussian(mean, log_std),
                             Eigen::VectorXd::Zero(5)};

  const Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(5, 1);
  const double loss = elbo_loss(enc, dec, window, carried, noise, 0.01,
                                nullptr, nullptr);
  // Zero nets: posterior = N(0, I), reconstruction = ln 0.5.
  const double kl = diag_gaussian_kl(DiagGaussian::standard(5), carried.dist);
  CHECK(kl >= 0.0);
  CHECK(loss ==
        doctest::Approx(-(std::log(0.5) - 0.01 * kl)).epsilon(1e-12));
}

TEST_CASE("empty window is a contract violation") {
  DenseNet enc({20, 8, 10}), dec({10, 8, 2});
  const LatentBelief carried = initial_belief(5);
  CHECK_THROWS_AS(elbo_loss(enc, dec, {}, carried, Eigen::MatrixXd(), 0.01,
                            nullptr, nullptr),
                  std::logic_error);
}

TEST_CASE("elbo gradients match finite differences") {
  const MatrixGame game = make_game("ibs");
  const int tau_dim = transition_encoding_dim(game);
  const int latent = 3;

  for (std::uint64_t seed : {21u, 22u, 23u}) {
    Rng rng(seed);
    DenseNet enc =
        DenseNet::random({latent + tau_dim, 10, 10, 2 * latent}, rng);
    DenseNet dec =
        DenseNet::random({game.state_count() + latent, 10, 10, 2}, rng);

    // A short window of random play with a nontrivial carried prior.
    std::vector<WindowItem> window;
    GameState state = GameState::initial();
    for (int k = 0; k < 5; ++k) {
      const auto tr =
          step(game, state, rng.uniform_int(2), rng.uniform_int(2)).first;
      window.push_back({encode_transition(game, tr),
                        encode_state(game, tr.state), tr.other_action});
      state = tr.next;
    }
    const LatentBelief carried{
        DiagGaussian(0.3 * rng.normal_vec(latent), 0.2 * rng.normal_vec(latent)),
        0.3 * rng.normal_vec(latent)};
    Eigen::MatrixXd noise(latent, window.size());
    for (int c = 0; c < noise.cols(); ++c)
      noise.col(c) = rng.normal_vec(latent);

    Eigen::VectorXd g_enc = Eigen::VectorXd::Zero(enc.param_count());
    Eigen::VectorXd g_dec = Eigen::VectorXd::Zero(dec.param_count());
    elbo_loss(enc, dec, window, carried, noise, 0.01, &g_enc, &g_dec);

    const auto loss_fn = [&] {
      return elbo_loss(enc, dec, window, carried, noise, 0.01, nullptr,
                       nullptr);
    };
    const Eigen::VectorXd fd_enc = amg_test::fd_grad(loss_fn, enc.params());
    const Eigen::VectorXd fd_dec = amg_test::fd_grad(loss_fn, dec.params());
    CHECK(amg_test::max_rel_err(g_enc, fd_enc) < 1e-4);
    CHECK(amg_test::max_rel_err(g_dec, fd_dec) < 1e-4);
  }
}

TEST_CASE("elbo loss decreases against a stationary scripted opponent") {
  InferenceRig rig(31, 0.01, /*lr=*/0.0005);

  // Held-out probe: a fixed window of fresh interactions with the same
  // stationary opponent, scored (never trained on) as training progresses.
  std::vector<WindowItem> probe;
  {
    Rng gen(812);
    GameState s = GameState::initial();
    for (int k = 0; k < 32; ++k) {
      const int a_col = gen.uniform() < 0.8 ? 1 : 0;
      const auto tr = step(rig.game, s, gen.uniform_int(2), a_col).first;
      probe.push_back({encode_transition(rig.game, tr),
                       encode_state(rig.game, tr.state), tr.other_action});
      s = tr.next;
    }
  }
  Eigen::MatrixXd probe_noise = Eigen::MatrixXd::Zero(rig.latent, 32);
  const LatentBelief prior = initial_belief(rig.latent);
  const auto probe_loss = [&] {
    return elbo_loss(rig.encoder, rig.decoder, probe, prior, probe_noise,
                     rig.kl_weight, nullptr, nullptr) /
           32.0;
  };

  GameState state = GameState::initial();
  std::vector<double> held_out;
  Rng opp(55);
  for (int t = 0; t < 1000; ++t) {
    held_out.push_back(probe_loss());
    const int a_col = opp.uniform() < 0.8 ? 1 : 0;  // mostly plays 1
    rig.env_step(state, a_col, &state);
  }
  const auto avg = [&](int from, int to) {
    double s = 0.0;
    for (int i = from; i < to; ++i) s += held_out[i];
    return s / (to - from);
  };
  // Moving average over 200 updates drops from the start to the end.
  CHECK(avg(800, 1000) < avg(0, 200));
}

TEST_CASE("decoder recovers a scripted action bias from logged data") {
  // Opponent plays action 1 with probability 0.9; with zero KL weight the
  // decoder's in-distribution predictions approach the true frequency.
  InferenceRig rig(41, /*kl_w=*/0.0);
  rig.window = 64;
  GameState state = GameState::initial();
  Rng opp(66);
  Eigen::VectorXd mean_probs = Eigen::VectorXd::Zero(2);
  int count = 0;
  for (int t = 0; t < 2500; ++t) {
    if (t >= 2000) {
      // Prediction for the current step, before observing it: the same
      // (state, latent) pair the reconstruction term trains on.
      mean_probs += decode_probs(rig.decoder, encode_state(rig.game, state),
                                 rig.belief.sample);
      count += 1;
    }
    const int a_col = opp.uniform() < 0.9 ? 1 : 0;
    rig.env_step(state, a_col, &state);
  }
  mean_probs /= count;
  Eigen::VectorXd truth(2);
  truth << 0.1, 0.9;
  CHECK(0.5 * (mean_probs - truth).lpNorm<1>() < 0.05);
}

TEST_CASE("decoder beats chance against a deterministic switching opponent") {
  // Opponent alternates actions every step; the transition carries the
  // previous joint action, so a trained model predicts the next action.
  InferenceRig rig(51);
  GameState state = GameState::initial();
  int a_col = 0;
  for (int t = 0; t < 1200; ++t) {
    rig.env_step(state, a_col, &state);
    a_col = 1 - a_col;
  }
  int correct = 0, total = 0;
  LatentBelief belief = rig.belief;
  for (int t = 0; t < 400; ++t) {
    const auto tr = step(rig.game, state, rig.rng.uniform_int(2), a_col).first;
    const Eigen::VectorXd probs = decode_probs(
        rig.decoder, encode_state(rig.game, tr.state), belief.sample);
    correct += (probs[a_col] > 0.5);
    total += 1;
    belief = encode_step(rig.encoder, belief, encode_transition(rig.game, tr),
                         Eigen::VectorXd::Zero(rig.latent));
    state = tr.next;
    a_col = 1 - a_col;
  }
  CHECK(static_cast<double>(correct) / total > 0.6);
}
