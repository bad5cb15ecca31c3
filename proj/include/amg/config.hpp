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

#ifndef AMG_CONFIG_HPP_
#define AMG_CONFIG_HPP_

#include <string>
#include <vector>

#include "amg/agent.hpp"

namespace amg {

// One experiment cell family: a game, a pair of agent kinds, per-agent
// hyperparameters and the run schedule. Parsed from flat `key = value` text
// (see docs in README); defaults come from the per-game preset tables.
struct ExperimentConfig {
  int schema_version = 1;
  std::string game = "ibs";
  std::string agent_i = "further";   // row player
  std::string agent_j = "qlearner";  // column player
  AgentHyper hyper_i, hyper_j;
  long total_steps = 20000;
  std::vector<int> seeds;  // default 0..19
  long eval_interval = 1000;
  long log_interval = 100;
  std::string out_dir;  // empty = in-memory only

  // q-learner opponent settings
  double q_lr = 0.5;
  double q_gamma = 0.9;
  double q_eps = 0.05;
  std::vector<double> q_init;  // one value per action, broadcast over states

  // scripted agent settings: one action per state, or a single broadcast one
  std::vector<int> scripted_i{0};
  std::vector<int> scripted_j{0};

  bool quiet = false;

  ExperimentConfig() {
    for (int s = 0; s < 20; ++s) seeds.push_back(s);
  }
};

// Parses and validates. Unknown keys, missing schema_version and per-field
// range violations all raise ConfigError naming the offending field.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

void validate_config(const ExperimentConfig& cfg);

// Raw key-value view of the same format, for subcommands with their own
// schema (chain and analyze specs).
std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::string& text);

}  // namespace amg

#endif  // AMG_CONFIG_HPP_
