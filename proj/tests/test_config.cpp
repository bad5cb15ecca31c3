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

#include "amg/config.hpp"

using namespace amg;

TEST_CASE("per-game hyperparameter tables") {
  const AgentHyper ibs = preset_hyper("ibs");
  CHECK(ibs.critic_lr == 0.002);
  CHECK(ibs.gain_lr == 0.02);
  CHECK(ibs.actor_lr == 0.0005);
  CHECK(ibs.inference_lr == 0.002);
  CHECK(ibs.entropy_weight == 0.4);
  CHECK(ibs.latent_dim == 5);
  CHECK(ibs.gamma == 0.99);
  CHECK(ibs.batch_size == 256);

  const AgentHyper ic = preset_hyper("ic");
  CHECK(ic.critic_lr == 0.0005);
  CHECK(ic.actor_lr == 0.0001);
  CHECK(ic.inference_lr == 0.0005);
  CHECK(ic.entropy_weight == 0.3);
  CHECK(ic.batch_size == 64);

  const AgentHyper imp = preset_hyper("imp");
  CHECK(imp.critic_lr == 0.01);
  CHECK(imp.gain_lr == 0.05);
  CHECK(imp.actor_lr == 0.001);
  CHECK(imp.entropy_weight == 0.35);
  CHECK(imp.batch_size == 64);

  // ipd runs on the ibs table.
  CHECK(preset_hyper("ipd").critic_lr == 0.002);
}

TEST_CASE("config parsing") {
  const std::string text = R"(
# Q1 experiment
schema_version = 1
game = ibs
agent_i = further
agent_j = qlearner
total_steps = 5000
seeds = 0..3
q_init = 0, 3
agent_i_actor_lr = 0.001
)";
  const ExperimentConfig cfg = parse_config_text(text);
  CHECK(cfg.game == "ibs");
  CHECK(cfg.agent_i == "further");
  CHECK(cfg.agent_j == "qlearner");
  CHECK(cfg.total_steps == 5000);
  CHECK(cfg.seeds == std::vector<int>{0, 1, 2, 3});
  CHECK(cfg.q_init == std::vector<double>{0.0, 3.0});
  CHECK(cfg.hyper_i.actor_lr == 0.001);
  CHECK(cfg.hyper_j.actor_lr == 0.0005);  // preset untouched
  CHECK(cfg.hyper_i.batch_size == 256);   // ibs preset

  const ExperimentConfig listed = parse_config_text(
      "schema_version = 1\ngame = imp\nseeds = 4, 7, 9\nbatch_size = 32\n");
  CHECK(listed.seeds == std::vector<int>{4, 7, 9});
  CHECK(listed.hyper_i.batch_size == 32);
  CHECK(listed.hyper_j.batch_size == 32);
}

TEST_CASE("validation rejects out-of-range fields by name") {
  const auto expect_error = [](const std::string& body,
                               const std::string& needle) {
    const std::string text = "schema_version = 1\n" + body + "\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text),
                         doctest::Contains(needle.c_str()), ConfigError);
  };

  expect_error("gamma = 1.5", "gamma");
  expect_error("gamma = 0", "gamma");
  expect_error("critic_lr = -1", "critic_lr");
  expect_error("actor_lr = 0", "actor_lr");
  expect_error("tau_q = 0", "tau_q");
  expect_error("tau_q = 2", "tau_q");
  expect_error("batch_size = 0", "batch_size");
  expect_error("latent_dim = 0", "latent_dim");
  expect_error("total_steps = -5", "total_steps");
  expect_error("log_interval = 0", "log_interval");
  expect_error("eval_interval = 0", "eval_interval");
  expect_error("q_eps = 1.5", "q_eps");
  expect_error("q_gamma = 1", "q_gamma");
  expect_error("buffer_capacity = 2\nbatch_size = 64", "buffer_capacity");
  expect_error("warmup_steps = -1", "warmup_steps");
  expect_error("game = tictactoe", "tictactoe");
  expect_error("agent_i = dqn", "dqn");
  expect_error("seeds = 9..3", "seeds");
  expect_error("scripted_action_j = 7", "scripted_action_j");
  expect_error("q_init = 1,2,3", "q_init");
  expect_error("mystery_knob = 1", "mystery_knob");

  // schema_version itself is required and pinned.
  CHECK_THROWS_WITH_AS(parse_config_text("game = ibs\n"),
                       doctest::Contains("schema_version"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("schema_version = 2\ngame = ibs\n"),
                       doctest::Contains("schema_version"), ConfigError);
}
