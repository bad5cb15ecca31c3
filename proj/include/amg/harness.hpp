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

#ifndef AMG_HARNESS_HPP_
#define AMG_HARNESS_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amg/config.hpp"
#include "amg/loop.hpp"
#include "amg/runlog.hpp"

namespace amg {

// Builds the configured agent for one side (player 0 = i/row, 1 = j/col).
AnyAgent make_agent(const ExperimentConfig& cfg, int player,
                    std::uint64_t seed);

// Runs one seed of the configured matchup; deterministic in (cfg, seed).
RunLog run_single(const ExperimentConfig& cfg, int seed);

// Runs every configured seed (cells in parallel, merged in seed order) and,
// when out_dir is set, writes one CSV per seed plus an eval-probe CSV.
RunLog run_matchup(const ExperimentConfig& cfg);

// Path of the per-seed CSV that run_matchup writes.
std::string runlog_path(const ExperimentConfig& cfg, int seed);

// Prefix sums of r_i - r_j per seed, recomputed from the logged reward
// columns (interval means weighted by interval length).
std::vector<std::pair<int, std::vector<double>>> relative_accumulated_reward(
    const RunLog& log);

// Interval-weighted mean of a column over the final `frac` of steps.
enum class LogColumn { kRi, kRj, kRhoI, kRhoJ, kCritic, kPolicy, kElbo };
double final_window_mean(const std::vector<RunRow>& seed_rows, double frac,
                         LogColumn column);

struct GammaRow {
  double gamma = 0.0;
  double avg_reward = 0.0;  // mean over seeds of converged reward
  double td_error = 0.0;    // mean over seeds of final-window critic loss
  std::vector<double> per_seed_reward;
  std::vector<double> per_seed_td;
};

// Reruns the configured matchup with agent_i forced to lili at each gamma.
std::vector<GammaRow> gamma_sweep(const ExperimentConfig& base,
                                  const std::vector<double>& gammas);

std::string gamma_table_to_csv(const std::vector<GammaRow>& rows);

// Across-seed aggregate: per-step mean and 95% t-interval half-width of each
// numeric column, after smoothing each seed series with a trailing moving
// average of `smooth_window` rows. With a single seed the half-widths are
// zero and `halfwidth_valid` is false (a warning is printed).
struct MetricSeries {
  std::vector<long> steps;
  std::vector<std::string> columns;
  Eigen::MatrixXd mean;       // steps x columns
  Eigen::MatrixXd halfwidth;  // steps x columns
  bool halfwidth_valid = false;
};

MetricSeries aggregate(const RunLog& log, int smooth_window = 10);

std::string metric_series_to_csv(const MetricSeries& series);

}  // namespace amg

#endif  // AMG_HARNESS_HPP_
