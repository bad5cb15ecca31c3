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

#include "amg/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace amg {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double d = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': cannot parse '" + value +
                      "' as a number");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': cannot parse '" + value +
                      "' as an integer");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<int> parse_seed_list(const std::string& key,
                                 const std::string& value) {
  std::vector<int> seeds;
  const auto range_pos = value.find("..");
  if (range_pos != std::string::npos) {
    const long lo = parse_long(key, trim(value.substr(0, range_pos)));
    const long hi = parse_long(key, trim(value.substr(range_pos + 2)));
    if (hi < lo) throw ConfigError("field '" + key + "': empty seed range");
    for (long s = lo; s <= hi; ++s) seeds.push_back(static_cast<int>(s));
    return seeds;
  }
  for (const auto& tok : split(value, ','))
    seeds.push_back(static_cast<int>(parse_long(key, tok)));
  return seeds;
}

// Applies one hyperparameter field; returns false if the key is not one.
bool apply_hyper(AgentHyper& h, const std::string& key,
                 const std::string& value) {
  if (key == "critic_lr") h.critic_lr = parse_double(key, value);
  else if (key == "gain_lr") h.gain_lr = parse_double(key, value);
  else if (key == "actor_lr") h.actor_lr = parse_double(key, value);
  else if (key == "inference_lr") h.inference_lr = parse_double(key, value);
  else if (key == "entropy_weight") h.entropy_weight = parse_double(key, value);
  else if (key == "latent_dim") h.latent_dim = (int)parse_long(key, value);
  else if (key == "gamma") h.gamma = parse_double(key, value);
  else if (key == "batch_size") h.batch_size = (int)parse_long(key, value);
  else if (key == "tau_q") h.tau_q = parse_double(key, value);
  else if (key == "buffer_capacity")
    h.buffer_capacity = (int)parse_long(key, value);
  else if (key == "warmup_steps") h.warmup_steps = (int)parse_long(key, value);
  else if (key == "hidden") h.hidden = (int)parse_long(key, value);
  else if (key == "hidden_layers")
    h.hidden_layers = (int)parse_long(key, value);
  else if (key == "elbo_every") h.elbo_every = (int)parse_long(key, value);
  else return false;
  return true;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
  const auto kvs = parse_key_values(text);

  // The game determines hyperparameter defaults, so find it first.
  ExperimentConfig cfg;
  bool has_version = false;
  for (const auto& [key, value] : kvs) {
    if (key == "game") cfg.game = value;
    if (key == "schema_version") {
      has_version = true;
      if (parse_long(key, value) != 1)
        throw ConfigError("field 'schema_version': only version 1 supported");
    }
  }
  if (!has_version)
    throw ConfigError("field 'schema_version' is required (set to 1)");
  cfg.hyper_i = preset_hyper(cfg.game);
  cfg.hyper_j = cfg.hyper_i;

  for (const auto& [key, value] : kvs) {
    if (key == "schema_version" || key == "game") continue;
    if (key == "agent_i") cfg.agent_i = value;
    else if (key == "agent_j") cfg.agent_j = value;
    else if (key == "total_steps") cfg.total_steps = parse_long(key, value);
    else if (key == "seeds") cfg.seeds = parse_seed_list(key, value);
    else if (key == "eval_interval") cfg.eval_interval = parse_long(key, value);
    else if (key == "log_interval") cfg.log_interval = parse_long(key, value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "q_lr") cfg.q_lr = parse_double(key, value);
    else if (key == "q_gamma") cfg.q_gamma = parse_double(key, value);
    else if (key == "q_eps") cfg.q_eps = parse_double(key, value);
    else if (key == "q_init") {
      cfg.q_init.clear();
      for (const auto& tok : split(value, ','))
        cfg.q_init.push_back(parse_double(key, tok));
    } else if (key == "scripted_action_i" || key == "scripted_action_j") {
      std::vector<int> actions;
      for (const auto& tok : split(value, ','))
        actions.push_back(static_cast<int>(parse_long(key, tok)));
      (key == "scripted_action_i" ? cfg.scripted_i : cfg.scripted_j) = actions;
    } else if (key == "quiet") {
      cfg.quiet = value == "true" || value == "1";
    } else if (starts_with(key, "agent_i_")) {
      if (!apply_hyper(cfg.hyper_i, key.substr(8), value))
        throw ConfigError("unknown field '" + key + "'");
    } else if (starts_with(key, "agent_j_")) {
      if (!apply_hyper(cfg.hyper_j, key.substr(8), value))
        throw ConfigError("unknown field '" + key + "'");
    } else if (apply_hyper(cfg.hyper_i, key, value)) {
      apply_hyper(cfg.hyper_j, key, value);
    } else {
      throw ConfigError("unknown field '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  make_game(cfg.game);  // throws for unknown names
  const AgentKind ki = parse_agent_kind(cfg.agent_i);
  const AgentKind kj = parse_agent_kind(cfg.agent_j);
  (void)ki;
  (void)kj;

  const auto check_hyper = [](const AgentHyper& h, const std::string& side) {
    const auto positive = [&side](double v, const std::string& name) {
      if (!(v > 0.0))
        throw ConfigError("field '" + side + name + "' must be positive");
    };
    positive(h.critic_lr, "critic_lr");
    positive(h.gain_lr, "gain_lr");
    positive(h.actor_lr, "actor_lr");
    positive(h.inference_lr, "inference_lr");
    if (h.entropy_weight < 0.0)
      throw ConfigError("field '" + side + "entropy_weight' must be >= 0");
    if (!(h.gamma > 0.0 && h.gamma < 1.0))
      throw ConfigError("field '" + side + "gamma' must be in (0, 1)");
    if (h.latent_dim < 1)
      throw ConfigError("field '" + side + "latent_dim' must be >= 1");
    if (h.batch_size < 1)
      throw ConfigError("field '" + side + "batch_size' must be >= 1");
    if (!(h.tau_q > 0.0 && h.tau_q <= 1.0))
      throw ConfigError("field '" + side + "tau_q' must be in (0, 1]");
    if (h.buffer_capacity < h.batch_size)
      throw ConfigError("field '" + side +
                        "buffer_capacity' must be >= batch_size");
    if (h.warmup_steps < 0)
      throw ConfigError("field '" + side + "warmup_steps' must be >= 0");
    if (h.hidden < 1 || h.hidden_layers < 1)
      throw ConfigError("field '" + side + "hidden/hidden_layers' must be >= 1");
    if (h.elbo_every < 1)
      throw ConfigError("field '" + side + "elbo_every' must be >= 1");
  };
  check_hyper(cfg.hyper_i, "agent_i_");
  check_hyper(cfg.hyper_j, "agent_j_");

  if (cfg.total_steps < 0)
    throw ConfigError("field 'total_steps' must be >= 0");
  if (cfg.seeds.empty()) throw ConfigError("field 'seeds' must be nonempty");
  if (cfg.eval_interval < 1)
    throw ConfigError("field 'eval_interval' must be >= 1");
  if (cfg.log_interval < 1)
    throw ConfigError("field 'log_interval' must be >= 1");
  if (!(cfg.q_lr > 0.0)) throw ConfigError("field 'q_lr' must be positive");
  if (!(cfg.q_gamma > 0.0 && cfg.q_gamma < 1.0))
    throw ConfigError("field 'q_gamma' must be in (0, 1)");
  if (cfg.q_eps < 0.0 || cfg.q_eps > 1.0)
    throw ConfigError("field 'q_eps' must be in [0, 1]");

  const MatrixGame game = make_game(cfg.game);
  if (!cfg.q_init.empty() &&
      static_cast<int>(cfg.q_init.size()) != game.n_actions[1])
    throw ConfigError("field 'q_init' must list one value per action");
  const auto check_script = [&](const std::vector<int>& actions,
                                const std::string& name, int player) {
    if (actions.size() != 1 &&
        static_cast<int>(actions.size()) != game.state_count())
      throw ConfigError("field '" + name +
                        "' must give 1 action or one per state");
    for (int a : actions)
      if (a < 0 || a >= game.n_actions[player])
        throw ConfigError("field '" + name + "' has an out-of-range action");
  };
  check_script(cfg.scripted_i, "scripted_action_i", 0);
  check_script(cfg.scripted_j, "scripted_action_j", 1);
}

}  // namespace amg
