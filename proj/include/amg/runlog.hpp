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

#ifndef AMG_RUNLOG_HPP_
#define AMG_RUNLOG_HPP_

#include <string>
#include <vector>

namespace amg {

// One logged interval. Reward and loss columns hold the mean over the steps
// since the previous row; relacc is the exact cumulative sum of r_i - r_j up
// to and including `step` environment steps.
struct RunRow {
  long step = 0;
  int seed = 0;
  double r_i = 0.0, r_j = 0.0;
  double rho_i = 0.0, rho_j = 0.0;
  double critic_loss = 0.0, policy_loss = 0.0, elbo_loss = 0.0;
  double relacc = 0.0;
};

struct RunLog {
  std::vector<RunRow> rows;  // ordered by (seed, step)

  std::vector<int> seeds() const;
  std::vector<RunRow> rows_for_seed(int seed) const;
};

// Column order of the CSV schema.
const std::vector<std::string>& runlog_columns();

// Locale-independent formatting with 9 significant digits.
std::string format_g9(double v);

void write_runlog_csv(const RunLog& log, const std::string& path);
RunLog read_runlog_csv(const std::string& path);

std::string runlog_to_csv(const RunLog& log);
RunLog runlog_from_csv(const std::string& text);

}  // namespace amg

#endif  // AMG_RUNLOG_HPP_
