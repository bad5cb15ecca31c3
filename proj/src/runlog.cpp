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

#include "amg/runlog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "amg/common.hpp"

namespace amg {

std::vector<int> RunLog::seeds() const {
  std::vector<int> out;
  for (const auto& row : rows)
    if (out.empty() || out.back() != row.seed) out.push_back(row.seed);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<RunRow> RunLog::rows_for_seed(int seed) const {
  std::vector<RunRow> out;
  for (const auto& row : rows)
    if (row.seed == seed) out.push_back(row);
  return out;
}

const std::vector<std::string>& runlog_columns() {
  static const std::vector<std::string> cols = {
      "step",        "seed",        "r_i",       "r_j",    "rho_i", "rho_j",
      "critic_loss", "policy_loss", "elbo_loss", "relacc"};
  return cols;
}

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string runlog_to_csv(const RunLog& log) {
  std::string out;
  const auto& cols = runlog_columns();
  for (size_t c = 0; c < cols.size(); ++c) {
    out += cols[c];
    out += c + 1 < cols.size() ? ',' : '\n';
  }
  for (const auto& r : log.rows) {
    AMG_CHECK_MSG(std::isfinite(r.r_i) && std::isfinite(r.r_j) &&
                      std::isfinite(r.critic_loss) &&
                      std::isfinite(r.policy_loss) &&
                      std::isfinite(r.elbo_loss) && std::isfinite(r.relacc) &&
                      std::isfinite(r.rho_i) && std::isfinite(r.rho_j),
                  "non-finite metric row");
    out += std::to_string(r.step) + ',' + std::to_string(r.seed) + ',';
    out += format_g9(r.r_i) + ',' + format_g9(r.r_j) + ',';
    out += format_g9(r.rho_i) + ',' + format_g9(r.rho_j) + ',';
    out += format_g9(r.critic_loss) + ',' + format_g9(r.policy_loss) + ',';
    out += format_g9(r.elbo_loss) + ',' + format_g9(r.relacc) + '\n';
  }
  return out;
}

RunLog runlog_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  AMG_CHECK_MSG(static_cast<bool>(std::getline(in, line)), "empty csv");

  RunLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ls, tok, ',')) toks.push_back(tok);
    AMG_CHECK_MSG(toks.size() == runlog_columns().size(), "bad csv row");
    RunRow r;
    r.step = std::stol(toks[0]);
    r.seed = std::stoi(toks[1]);
    r.r_i = std::stod(toks[2]);
    r.r_j = std::stod(toks[3]);
    r.rho_i = std::stod(toks[4]);
    r.rho_j = std::stod(toks[5]);
    r.critic_loss = std::stod(toks[6]);
    r.policy_loss = std::stod(toks[7]);
    r.elbo_loss = std::stod(toks[8]);
    r.relacc = std::stod(toks[9]);
    log.rows.push_back(r);
  }
  return log;
}

void write_runlog_csv(const RunLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  AMG_CHECK_MSG(static_cast<bool>(out), "cannot open output file");
  out << runlog_to_csv(log);
}

RunLog read_runlog_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open runlog csv '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return runlog_from_csv(buf.str());
}

}  // namespace amg
