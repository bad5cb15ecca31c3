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

#include "amg/harness.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <thread>

#include "amg/stats.hpp"

namespace amg {
namespace {

std::vector<int> broadcast_script(const std::vector<int>& actions,
                                  int n_states) {
  if (static_cast<int>(actions.size()) == n_states) return actions;
  return std::vector<int>(n_states, actions.front());
}

double column_value(const RunRow& row, LogColumn column) {
  switch (column) {
    case LogColumn::kRi: return row.r_i;
    case LogColumn::kRj: return row.r_j;
    case LogColumn::kRhoI: return row.rho_i;
    case LogColumn::kRhoJ: return row.rho_j;
    case LogColumn::kCritic: return row.critic_loss;
    case LogColumn::kPolicy: return row.policy_loss;
    case LogColumn::kElbo: return row.elbo_loss;
  }
  return 0.0;
}

// Frozen-parameter rollout with greedy actions and mean-belief latents.
std::pair<double, double> eval_probe(const MatrixGame& game, AnyAgent row,
                                     AnyAgent col, std::uint64_t seed,
                                     long probe_steps) {
  Rng rng_row = Rng(seed).child(41);
  Rng rng_col = Rng(seed).child(42);
  GameState state = GameState::initial();
  double sum_row = 0.0, sum_col = 0.0;

  const auto pick = [&](AnyAgent& agent, Rng& rng) {
    const int s_idx = state_index(game, state);
    if (auto* neural = std::get_if<NeuralAgent>(&agent)) {
      const Eigen::VectorXd z = neural->has_model()
                                    ? neural->belief.dist.mean
                                    : neural->belief.sample;
      return act(*neural, Eigen::VectorXd::Unit(neural->state_dim, s_idx), z,
                 ActMode::kEval, rng);
    }
    if (auto* ql = std::get_if<TabularQLearner>(&agent))
      return ql->act(s_idx, rng);
    return std::get<ScriptedAgent>(agent).action_by_state[s_idx];
  };

  for (long t = 0; t < probe_steps; ++t) {
    const int a_row = pick(row, rng_row);
    const int a_col = pick(col, rng_col);
    const auto both = step(game, state, a_row, a_col);
    sum_row += both.first.reward;
    sum_col += both.second.reward;
    for (auto* side : {&row, &col}) {
      auto* neural = std::get_if<NeuralAgent>(side);
      if (neural == nullptr || !neural->has_model()) continue;
      const Transition tr = side == &row ? both.first : both.second;
      neural->belief = encode_step(neural->encoder, neural->belief,
                                   encode_transition(game, tr),
                                   Eigen::VectorXd::Zero(neural->latent_dim));
    }
    state = both.first.next;
  }
  return {sum_row / probe_steps, sum_col / probe_steps};
}

struct EvalRow {
  long step;
  int seed;
  double r_i, r_j;
};

std::string eval_rows_to_csv(const std::vector<EvalRow>& rows) {
  std::string out = "step,seed,eval_r_i,eval_r_j\n";
  for (const auto& r : rows) {
    out += std::to_string(r.step) + ',' + std::to_string(r.seed) + ',';
    out += format_g9(r.r_i) + ',' + format_g9(r.r_j) + '\n';
  }
  return out;
}

std::mutex g_progress_mutex;

// Core seed loop shared by run_single and run_matchup. When `eval_rows` is
// non-null, frozen eval probes run at every eval_interval boundary.
RunLog run_seed(const ExperimentConfig& cfg, int seed,
                std::vector<EvalRow>* eval_rows) {
  const MatrixGame game = make_game(cfg.game);
  World world(game, static_cast<std::uint64_t>(seed));
  AnyAgent row = make_agent(cfg, 0, seed);
  AnyAgent col = make_agent(cfg, 1, seed);

  RunLog log;
  double relacc = 0.0;
  RunRow acc;
  long interval = 0;
  for (long t = 0; t < cfg.total_steps; ++t) {
    const StepMetrics m = further_loop_step(world, row, col);
    relacc += m.r_row - m.r_col;
    acc.r_i += m.r_row;
    acc.r_j += m.r_col;
    acc.critic_loss += m.critic_loss;
    acc.policy_loss += m.policy_loss;
    acc.elbo_loss += m.elbo_loss;
    interval += 1;
    if ((t + 1) % cfg.log_interval == 0 || t + 1 == cfg.total_steps) {
      RunRow out;
      out.step = t + 1;
      out.seed = seed;
      out.r_i = acc.r_i / interval;
      out.r_j = acc.r_j / interval;
      out.rho_i = m.rho_row;
      out.rho_j = m.rho_col;
      out.critic_loss = acc.critic_loss / interval;
      out.policy_loss = acc.policy_loss / interval;
      out.elbo_loss = acc.elbo_loss / interval;
      out.relacc = relacc;
      log.rows.push_back(out);
      acc = RunRow{};
      interval = 0;
    }
    if (eval_rows != nullptr && (t + 1) % cfg.eval_interval == 0) {
      const auto [er, ec] = eval_probe(
          world.game, row, col,
          mix_seed(seed, 40000 + static_cast<std::uint64_t>(t)), 1000);
      eval_rows->push_back({t + 1, seed, er, ec});
    }
  }
  return log;
}

}  // namespace

AnyAgent make_agent(const ExperimentConfig& cfg, int player,
                    std::uint64_t seed) {
  const MatrixGame game = make_game(cfg.game);
  const std::string& kind_name = player == 0 ? cfg.agent_i : cfg.agent_j;
  const AgentKind kind = parse_agent_kind(kind_name);
  switch (kind) {
    case AgentKind::kFurther:
    case AgentKind::kLili:
    case AgentKind::kMasac: {
      Rng init = Rng(seed).child(300 + player);
      return make_neural_agent(kind, game, player,
                               player == 0 ? cfg.hyper_i : cfg.hyper_j, init);
    }
    case AgentKind::kQLearner: {
      TabularQLearner ql(game.state_count(), game.n_actions[player], cfg.q_lr,
                         cfg.q_gamma, cfg.q_eps);
      ql.player = player;
      if (!cfg.q_init.empty())
        for (int a = 0; a < game.n_actions[player]; ++a)
          ql.q.col(a).setConstant(cfg.q_init[a]);
      return ql;
    }
    case AgentKind::kScripted: {
      ScriptedAgent scripted;
      scripted.player = player;
      scripted.action_by_state = broadcast_script(
          player == 0 ? cfg.scripted_i : cfg.scripted_j, game.state_count());
      return scripted;
    }
  }
  throw ConfigError("unhandled agent kind");
}

RunLog run_single(const ExperimentConfig& cfg, int seed) {
  validate_config(cfg);
  return run_seed(cfg, seed, nullptr);
}

std::string runlog_path(const ExperimentConfig& cfg, int seed) {
  return cfg.out_dir + "/run_" + cfg.game + "_" + cfg.agent_i + "-vs-" +
         cfg.agent_j + "_seed" + std::to_string(seed) + ".csv";
}

RunLog run_matchup(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (!cfg.out_dir.empty())
    std::filesystem::create_directories(cfg.out_dir);

  const int n = static_cast<int>(cfg.seeds.size());
  std::vector<RunLog> per_seed(n);
  std::vector<std::vector<EvalRow>> eval_rows(n);
  std::atomic<int> next{0};
  const int workers = std::max(
      1u, std::min<unsigned>(std::thread::hardware_concurrency(), n));

  const auto run_one = [&](int idx) {
    const int seed = cfg.seeds[idx];
    const bool want_eval = cfg.eval_interval > 0 && !cfg.out_dir.empty();
    per_seed[idx] = run_seed(cfg, seed, want_eval ? &eval_rows[idx] : nullptr);
    if (!cfg.quiet) {
      std::lock_guard<std::mutex> lock(g_progress_mutex);
      std::cout << "finished " << cfg.game << " " << cfg.agent_i << "-vs-"
                << cfg.agent_j << " seed " << seed << std::endl;
    }
  };

  std::vector<std::future<void>> futures;
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) run_one(i);
    }));
  }
  for (auto& f : futures) f.get();

  RunLog merged;
  for (int i = 0; i < n; ++i) {
    if (!cfg.out_dir.empty()) {
      write_runlog_csv(per_seed[i], runlog_path(cfg, cfg.seeds[i]));
      std::ofstream eval_out(runlog_path(cfg, cfg.seeds[i]) + ".eval.csv",
                             std::ios::binary);
      eval_out << eval_rows_to_csv(eval_rows[i]);
    }
    merged.rows.insert(merged.rows.end(), per_seed[i].rows.begin(),
                       per_seed[i].rows.end());
  }
  return merged;
}

std::vector<std::pair<int, std::vector<double>>> relative_accumulated_reward(
    const RunLog& log) {
  std::vector<std::pair<int, std::vector<double>>> out;
  for (int seed : log.seeds()) {
    std::vector<double> series;
    double acc = 0.0;
    long prev_step = 0;
    for (const auto& row : log.rows_for_seed(seed)) {
      acc += (row.r_i - row.r_j) * static_cast<double>(row.step - prev_step);
      prev_step = row.step;
      series.push_back(acc);
    }
    out.emplace_back(seed, std::move(series));
  }
  return out;
}

double final_window_mean(const std::vector<RunRow>& seed_rows, double frac,
                         LogColumn column) {
  AMG_CHECK(!seed_rows.empty() && frac > 0.0 && frac <= 1.0);
  const long last_step = seed_rows.back().step;
  const double cutoff = last_step * (1.0 - frac);
  double weighted = 0.0, weight = 0.0;
  long prev_step = 0;
  for (const auto& row : seed_rows) {
    const long len = row.step - prev_step;
    prev_step = row.step;
    if (row.step <= cutoff) continue;
    weighted += column_value(row, column) * len;
    weight += len;
  }
  AMG_CHECK(weight > 0.0);
  return weighted / weight;
}

std::vector<GammaRow> gamma_sweep(const ExperimentConfig& base,
                                  const std::vector<double>& gammas) {
  for (double g : gammas)
    if (!(g > 0.0 && g < 1.0))
      throw ConfigError("field 'gammas' must lie in (0, 1)");

  std::vector<GammaRow> table;
  for (double g : gammas) {
    ExperimentConfig cfg = base;
    cfg.agent_i = "lili";
    cfg.hyper_i.gamma = g;
    if (!base.out_dir.empty())
      cfg.out_dir = base.out_dir + "/gamma_" + format_g9(g);
    const RunLog log = run_matchup(cfg);

    GammaRow row;
    row.gamma = g;
    for (int seed : log.seeds()) {
      const auto rows = log.rows_for_seed(seed);
      row.per_seed_reward.push_back(
          final_window_mean(rows, 0.1, LogColumn::kRi));
      row.per_seed_td.push_back(
          final_window_mean(rows, 0.1, LogColumn::kCritic));
    }
    row.avg_reward = mean(row.per_seed_reward);
    row.td_error = mean(row.per_seed_td);
    table.push_back(std::move(row));
  }
  return table;
}

std::string gamma_table_to_csv(const std::vector<GammaRow>& rows) {
  std::string out = "gamma,avg_reward,td_error\n";
  for (const auto& r : rows) {
    out += format_g9(r.gamma) + ',' + format_g9(r.avg_reward) + ',' +
           format_g9(r.td_error) + '\n';
  }
  return out;
}

MetricSeries aggregate(const RunLog& log, int smooth_window) {
  const std::vector<int> seeds = log.seeds();
  AMG_CHECK_MSG(!seeds.empty(), "aggregate needs at least one seed");
  const auto first_rows = log.rows_for_seed(seeds.front());

  MetricSeries series;
  for (const auto& row : first_rows) series.steps.push_back(row.step);
  series.columns = {"r_i",         "r_j",         "rho_i",
                    "rho_j",       "critic_loss", "policy_loss",
                    "elbo_loss",   "relacc"};
  const int n_steps = static_cast<int>(series.steps.size());
  const int n_cols = static_cast<int>(series.columns.size());
  series.mean.setZero(n_steps, n_cols);
  series.halfwidth.setZero(n_steps, n_cols);
  series.halfwidth_valid = seeds.size() >= 2;
  if (!series.halfwidth_valid)
    std::cerr << "warning: aggregate over a single seed; confidence "
                 "half-widths are undefined and reported as zero\n";

  const auto select = [](const RunRow& r, int c) -> double {
    switch (c) {
      case 0: return r.r_i;
      case 1: return r.r_j;
      case 2: return r.rho_i;
      case 3: return r.rho_j;
      case 4: return r.critic_loss;
      case 5: return r.policy_loss;
      case 6: return r.elbo_loss;
      default: return r.relacc;
    }
  };

  for (int c = 0; c < n_cols; ++c) {
    // seed x step matrix of smoothed values
    std::vector<std::vector<double>> smoothed;
    for (int seed : seeds) {
      const auto rows = log.rows_for_seed(seed);
      AMG_CHECK_MSG(static_cast<int>(rows.size()) == n_steps,
                    "seeds logged on different step grids");
      std::vector<double> xs(n_steps);
      for (int i = 0; i < n_steps; ++i) {
        AMG_CHECK(rows[i].step == series.steps[i]);
        xs[i] = select(rows[i], c);
      }
      smoothed.push_back(moving_average(xs, smooth_window));
    }
    for (int i = 0; i < n_steps; ++i) {
      std::vector<double> at_step;
      at_step.reserve(seeds.size());
      for (const auto& s : smoothed) at_step.push_back(s[i]);
      series.mean(i, c) = mean(at_step);
      if (series.halfwidth_valid)
        series.halfwidth(i, c) = t_interval_halfwidth(at_step);
    }
  }
  return series;
}

std::string metric_series_to_csv(const MetricSeries& series) {
  std::string out = "step";
  for (const auto& col : series.columns)
    out += "," + col + "_mean," + col + "_hw";
  out += '\n';
  for (size_t i = 0; i < series.steps.size(); ++i) {
    out += std::to_string(series.steps[i]);
    for (int c = 0; c < series.mean.cols(); ++c) {
      out += ',' + format_g9(series.mean(i, c)) + ',' +
             format_g9(series.halfwidth(i, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace amg
