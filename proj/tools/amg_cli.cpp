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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "amg/config.hpp"
#include "amg/harness.hpp"
#include "amg/joint_chain.hpp"
#include "amg/policy_sweep.hpp"

namespace {

using amg::ConfigError;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::map<std::string, std::string> kv_map(const std::string& path) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : amg::parse_key_values(read_file(path))) m[k] = v;
  return m;
}

std::string get_or(const std::map<std::string, std::string>& m,
                   const std::string& key, const std::string& fallback) {
  const auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

double num_or(const std::map<std::string, std::string>& m,
              const std::string& key, double fallback) {
  const auto it = m.find(key);
  if (it == m.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': cannot parse '" + it->second +
                      "'");
  }
}

std::vector<double> num_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("field '" + key + "': cannot parse '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError("field '" + key + "' is empty");
  return out;
}

void write_text(const std::string& path, const std::string& text,
                bool quiet) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!quiet) std::cout << "wrote " << path << std::endl;
}

int cmd_run(const std::string& config_path, int seed_override,
            const std::string& out_override, bool quiet) {
  amg::ExperimentConfig cfg = amg::parse_config_file(config_path);
  if (seed_override >= 0) cfg.seeds = {seed_override};
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (cfg.out_dir.empty()) cfg.out_dir = "out";
  cfg.quiet = cfg.quiet || quiet;

  const amg::RunLog log = amg::run_matchup(cfg);
  const amg::MetricSeries agg = amg::aggregate(log);
  write_text(cfg.out_dir + "/aggregate_" + cfg.game + "_" + cfg.agent_i +
                 "-vs-" + cfg.agent_j + ".csv",
             amg::metric_series_to_csv(agg), cfg.quiet);
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& gammas_arg,
              const std::string& out_override, bool quiet) {
  amg::ExperimentConfig cfg = amg::parse_config_file(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (cfg.out_dir.empty()) cfg.out_dir = "out";
  cfg.quiet = cfg.quiet || quiet;
  const std::vector<double> gammas = num_list("gammas", gammas_arg);
  const auto table = amg::gamma_sweep(cfg, gammas);
  write_text(cfg.out_dir + "/sweep_" + cfg.game + ".csv",
             amg::gamma_table_to_csv(table), cfg.quiet);
  return 0;
}

int cmd_analyze(const std::string& mode, const std::string& config_path,
                const std::string& out_override, bool quiet) {
  const auto kv = kv_map(config_path);
  const std::string out_dir =
      !out_override.empty() ? out_override : get_or(kv, "out_dir", "out");
  const amg::MatrixGame game = amg::make_game(get_or(kv, "game", "ipd"));
  const long horizon = static_cast<long>(num_or(kv, "horizon", 30000));
  const int rollouts = static_cast<int>(num_or(kv, "rollouts", 2));
  const auto seed = static_cast<std::uint64_t>(num_or(kv, "seed", 0));

  if (mode == "appendixA") {
    const std::string mode_name = get_or(kv, "opponent_mode", "greedy");
    amg::OpponentMode omode;
    if (mode_name == "greedy") omode = amg::OpponentMode::kGreedy;
    else if (mode_name == "glie") omode = amg::OpponentMode::kGlie;
    else throw ConfigError("field 'opponent_mode' must be greedy or glie");

    const int points = static_cast<int>(num_or(kv, "grid_points", 9));
    const double lo = num_or(kv, "grid_min", -3.0);
    const double hi = num_or(kv, "grid_max", 3.0);
    if (points < 1) throw ConfigError("field 'grid_points' must be >= 1");
    const Eigen::VectorXd axis = Eigen::VectorXd::LinSpaced(points, lo, hi);

    const amg::SweepResult result =
        amg::policy_iteration_sweep(game, omode, axis, horizon, rollouts, seed);
    std::string csv = "q_init_action0,q_init_action1,best_avg_reward\n";
    for (int i = 0; i < points; ++i)
      for (int j = 0; j < points; ++j)
        csv += amg::format_g9(axis[i]) + ',' + amg::format_g9(axis[j]) + ',' +
               amg::format_g9(result.best_avg_reward(i, j)) + '\n';
    write_text(out_dir + "/analyze_" + game.name + "_" + mode_name + ".csv",
               csv, quiet);
    std::cout << "best-average-reward range across grid: "
              << amg::format_g9(result.range()) << std::endl;
    return 0;
  }

  if (mode == "deviation") {
    const auto parse_policy = [&](const std::string& key) {
      std::vector<int> p;
      for (double v : num_list(key, get_or(kv, key, "0")))
        p.push_back(static_cast<int>(v));
      if (p.size() == 1)
        p.assign(static_cast<size_t>(game.state_count()), p[0]);
      if (static_cast<int>(p.size()) != game.state_count())
        throw ConfigError("field '" + key +
                          "' must give 1 action or one per state");
      return p;
    };
    const auto row = parse_policy("row_policy");
    const auto col = parse_policy("col_policy");
    const amg::DeviationReport report =
        amg::deviation_gain(game, row, col, horizon, rollouts, seed);
    std::string csv = "side,gain\n";
    csv += "row," + amg::format_g9(report.gain_row) + '\n';
    csv += "col," + amg::format_g9(report.gain_col) + '\n';
    write_text(out_dir + "/deviation_" + game.name + ".csv", csv, quiet);
    std::cout << "max unilateral gain: " << amg::format_g9(report.max_gain())
              << std::endl;
    return 0;
  }

  throw ConfigError("unknown analyze mode '" + mode +
                    "' (valid: appendixA, deviation)");
}

int cmd_chain(const std::string& config_path, const std::string& out_override,
              bool quiet) {
  const auto kv = kv_map(config_path);
  const std::string out_dir =
      !out_override.empty() ? out_override : get_or(kv, "out_dir", "out");
  const amg::MatrixGame game = amg::make_game(get_or(kv, "game", "ipd"));

  amg::ChainSpec spec;
  if (kv.count("q_levels"))
    spec.q_levels = num_list("q_levels", kv.at("q_levels"));
  spec.per_state_q = get_or(kv, "per_state_q", "0") == "1";
  const std::string row_policy = get_or(kv, "row_policy", "uniform");
  if (row_policy != "uniform") {
    // Deterministic row actions: one value, or one per state.
    std::vector<double> actions = num_list("row_policy", row_policy);
    if (actions.size() == 1)
      actions.assign(static_cast<size_t>(game.state_count()), actions[0]);
    if (static_cast<int>(actions.size()) != game.state_count())
      throw ConfigError("field 'row_policy' must give 1 action or one per "
                        "state");
    spec.row_policy =
        Eigen::MatrixXd::Zero(game.state_count(), game.n_actions[0]);
    for (int s = 0; s < game.state_count(); ++s) {
      const int a = static_cast<int>(actions[s]);
      if (a < 0 || a >= game.n_actions[0])
        throw ConfigError("field 'row_policy' has an out-of-range action");
      spec.row_policy(s, a) = 1.0;
    }
  }
  spec.q_lr = num_or(kv, "q_lr", spec.q_lr);
  spec.q_gamma = num_or(kv, "q_gamma", spec.q_gamma);
  spec.max_nodes = static_cast<int>(num_or(kv, "max_nodes", spec.max_nodes));
  const int k = static_cast<int>(num_or(kv, "k", 1));
  const std::vector<double> epsilons =
      num_list("epsilons", get_or(kv, "epsilons", "0.1,0.03,0.01"));

  // Initial distributions: 'uniform' or 'node:<state>:<policy>' tokens
  // separated by '|'.
  const amg::JointChain probe = amg::build_joint_chain(game, spec, 0.1);
  std::vector<Eigen::VectorXd> inits;
  std::istringstream init_text(get_or(
      kv, "inits",
      "uniform | node:0:0 | node:0:" + std::to_string(probe.n_policies - 1)));
  std::string tok;
  while (std::getline(init_text, tok, '|')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    tok = tok.substr(b, e - b + 1);
    if (tok == "uniform") {
      inits.push_back(Eigen::VectorXd::Constant(probe.n_nodes(),
                                                1.0 / probe.n_nodes()));
    } else if (tok.rfind("node:", 0) == 0) {
      const auto c1 = tok.find(':', 5);
      if (c1 == std::string::npos)
        throw ConfigError("field 'inits': bad token '" + tok + "'");
      const int s = std::stoi(tok.substr(5, c1 - 5));
      const int p = std::stoi(tok.substr(c1 + 1));
      if (s < 0 || s >= probe.n_states || p < 0 || p >= probe.n_policies)
        throw ConfigError("field 'inits': node out of range in '" + tok + "'");
      inits.push_back(Eigen::VectorXd::Unit(probe.n_nodes(), probe.node(s, p)));
    } else {
      throw ConfigError("field 'inits': bad token '" + tok + "'");
    }
  }

  const amg::InitIndependenceReport report =
      amg::check_init_independence(game, spec, k, inits, epsilons);
  std::string csv = "epsilon,max_pairwise_tv,all_converged,recurrent_classes\n";
  for (const auto& row : report.rows) {
    const amg::JointChain chain =
        amg::build_joint_chain(game, spec, row.epsilon);
    csv += amg::format_g9(row.epsilon) + ',' +
           amg::format_g9(row.max_pairwise_tv) + ',' +
           (row.all_converged ? "1" : "0") + ',' +
           std::to_string(amg::recurrent_class_count(chain)) + '\n';
  }
  write_text(out_dir + "/chain_" + game.name + ".csv", csv, quiet);
  std::cout << (report.pass ? "PASS" : "FAIL")
            << ": initial-condition independence across epsilons"
            << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"average-reward multiagent learning lab for iterated matrix "
               "games"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress lines");

  std::string config_path, out_dir, gammas, mode;
  int seed = -1;

  CLI::App* run = app.add_subcommand("run", "run a configured matchup");
  run->fallthrough();
  run->add_option("--config", config_path, "experiment config file")
      ->required();
  run->add_option("--seed", seed, "run a single seed instead of the list");
  run->add_option("--out", out_dir, "output directory");

  CLI::App* sweep =
      app.add_subcommand("sweep", "rerun the matchup with lili at each gamma");
  sweep->fallthrough();
  sweep->add_option("--config", config_path, "experiment config file")
      ->required();
  sweep->add_option("--gammas", gammas, "comma-separated discount factors")
      ->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "exact analyses: appendixA sensitivity grid or deviation "
                 "gains");
  analyze->fallthrough();
  analyze->add_option("--mode", mode, "appendixA or deviation")->required();
  analyze->add_option("--config", config_path, "analysis spec file")
      ->required();
  analyze->add_option("--out", out_dir, "output directory");

  CLI::App* chain = app.add_subcommand(
      "chain", "stationary-distribution analysis of a discretized joint "
               "chain");
  chain->fallthrough();
  chain->add_option("--config", config_path, "chain spec file")->required();
  chain->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path, seed, out_dir, quiet);
    if (sweep->parsed()) return cmd_sweep(config_path, gammas, out_dir, quiet);
    if (analyze->parsed()) return cmd_analyze(mode, config_path, out_dir, quiet);
    if (chain->parsed()) return cmd_chain(config_path, out_dir, quiet);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}
