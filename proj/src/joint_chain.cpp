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

#include "amg/joint_chain.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace amg {
namespace {

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<int> decode_levels(int policy_idx, int entries, int levels) {
  std::vector<int> lv(entries);
  for (int e = 0; e < entries; ++e) {
    lv[e] = policy_idx % levels;
    policy_idx /= levels;
  }
  return lv;
}

int encode_levels(const std::vector<int>& lv, int levels) {
  int idx = 0;
  for (int e = static_cast<int>(lv.size()) - 1; e >= 0; --e)
    idx = idx * levels + lv[e];
  return idx;
}

// Neighbors differ in exactly one entry by exactly one level.
std::vector<int> policy_neighbors(const std::vector<int>& lv, int levels) {
  std::vector<int> out;
  std::vector<int> tmp = lv;
  for (size_t e = 0; e < lv.size(); ++e) {
    if (lv[e] > 0) {
      tmp[e] = lv[e] - 1;
      out.push_back(encode_levels(tmp, levels));
      tmp[e] = lv[e];
    }
    if (lv[e] + 1 < levels) {
      tmp[e] = lv[e] + 1;
      out.push_back(encode_levels(tmp, levels));
      tmp[e] = lv[e];
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd JointChain::propagate(const Eigen::VectorXd& mu) const {
  AMG_CHECK(mu.size() == n_nodes());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_nodes());
  for (int i = 0; i < P.outerSize(); ++i) {
    const double w = mu[i];
    if (w == 0.0) continue;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(P, i);
         it; ++it)
      out[it.col()] += w * it.value();
  }
  return out;
}

std::vector<int> levels_from_policy(const JointChain& chain, int policy_idx) {
  return decode_levels(policy_idx, chain.n_entries, chain.n_levels);
}

int policy_from_levels(const JointChain& chain, const std::vector<int>& lv) {
  return encode_levels(lv, chain.n_levels);
}

JointChain build_joint_chain(const MatrixGame& game, const ChainSpec& spec,
                             double epsilon) {
  AMG_CHECK_MSG(epsilon >= 0.0 && epsilon <= 1.0, "epsilon in [0, 1]");
  AMG_CHECK_MSG(!spec.q_levels.empty(), "need at least one q level");

  JointChain chain;
  chain.epsilon = epsilon;
  chain.n_states = game.state_count();
  chain.n_levels = static_cast<int>(spec.q_levels.size());
  const int n_col_actions = game.n_actions[1];
  chain.n_entries = spec.per_state_q ? chain.n_states * n_col_actions
                                     : n_col_actions;
  const long long n_pol = ipow(chain.n_levels, chain.n_entries);
  if (n_pol * chain.n_states > spec.max_nodes) {
    std::ostringstream os;
    os << "joint chain would need " << n_pol * chain.n_states
       << " nodes, above the budget of " << spec.max_nodes;
    throw ConfigError(os.str());
  }
  chain.n_policies = static_cast<int>(n_pol);

  Eigen::MatrixXd row_policy = spec.row_policy;
  if (row_policy.size() == 0) {
    row_policy = Eigen::MatrixXd::Constant(
        chain.n_states, game.n_actions[0], 1.0 / game.n_actions[0]);
  }
  AMG_CHECK(row_policy.rows() == chain.n_states &&
            row_policy.cols() == game.n_actions[0]);

  const auto entry_of = [&](int s, int a) {
    return spec.per_state_q ? s * n_col_actions + a : a;
  };
  const auto q_value = [&](const std::vector<int>& lv, int s, int a) {
    return spec.q_levels[lv[entry_of(s, a)]];
  };
  const auto greedy = [&](const std::vector<int>& lv, int s) {
    int best = 0;
    for (int a = 1; a < n_col_actions; ++a)
      if (q_value(lv, s, a) > q_value(lv, s, best)) best = a;
    return best;
  };

  std::vector<Eigen::Triplet<double>> trip;
  for (int pol = 0; pol < chain.n_policies; ++pol) {
    const std::vector<int> lv = decode_levels(pol, chain.n_entries,
                                              chain.n_levels);
    const std::vector<int> neighbors = policy_neighbors(lv, chain.n_levels);
    for (int s = 0; s < chain.n_states; ++s) {
      const int from = chain.node(s, pol);
      const GameState state = state_from_index(game, s);
      const int a_col = greedy(lv, s);
      for (int a_row = 0; a_row < game.n_actions[0]; ++a_row) {
        const double p = row_policy(s, a_row);
        if (p == 0.0) continue;
        const GameState next = GameState::joint(a_row, a_col);
        const int s_next = state_index(game, next);
        (void)state;

        // Deterministic update: move the visited entry one level toward the
        // q-learning target.
        double q_next_max = q_value(lv, s_next, 0);
        for (int a = 1; a < n_col_actions; ++a)
          q_next_max = std::max(q_next_max, q_value(lv, s_next, a));
        const double r_col = game.payoff_col(a_row, a_col);
        const int e = entry_of(s, a_col);
        const double value = spec.q_levels[lv[e]];
        const double target =
            value + spec.q_lr * (r_col + spec.q_gamma * q_next_max - value);
        std::vector<int> lv_next = lv;
        if (target > value && lv[e] + 1 < chain.n_levels)
          lv_next[e] = lv[e] + 1;
        else if (target < value && lv[e] > 0)
          lv_next[e] = lv[e] - 1;
        const int pol_det = encode_levels(lv_next, chain.n_levels);

        // The kick needs a neighbor to land on; degenerate policy sets fall
        // back to the deterministic update.
        const double kick = neighbors.empty() ? 0.0 : epsilon;
        if (kick < 1.0)
          trip.emplace_back(from, chain.node(s_next, pol_det),
                            p * (1.0 - kick));
        if (kick > 0.0) {
          const double w = p * kick / neighbors.size();
          for (int nb : neighbors)
            trip.emplace_back(from, chain.node(s_next, nb), w);
        }
      }
    }
  }

  chain.P.resize(chain.n_nodes(), chain.n_nodes());
  chain.P.setFromTriplets(trip.begin(), trip.end());

  for (int i = 0; i < chain.P.outerSize(); ++i) {
    double sum = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
             chain.P, i);
         it; ++it)
      sum += it.value();
    AMG_CHECK_MSG(std::abs(sum - 1.0) < 1e-12, "row not stochastic");
  }
  return chain;
}

double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 0.5 * (a - b).lpNorm<1>();
}

Eigen::VectorXd PeriodicDistribution::time_average() const {
  AMG_CHECK(!phases.empty());
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(phases[0].size());
  for (const auto& p : phases) avg += p;
  return avg / static_cast<double>(phases.size());
}

PeriodicDistribution stationary_periodic(const JointChain& chain, int k,
                                         const Eigen::VectorXd& init) {
  AMG_CHECK_MSG(k >= 1, "period must be at least 1");
  AMG_CHECK(init.size() == chain.n_nodes());
  AMG_CHECK_MSG(std::abs(init.sum() - 1.0) < 1e-9 && init.minCoeff() >= 0.0,
                "init must be a distribution");

  constexpr double kTol = 1e-10;
  constexpr long kMaxIter = 1'000'000;
  Eigen::VectorXd mu = init;
  double prev_diff = -1.0;
  double gap_estimate = 0.0;
  long iter = 0;
  for (; iter < kMaxIter; ++iter) {
    Eigen::VectorXd next = mu;
    for (int i = 0; i < k; ++i) next = chain.propagate(next);
    const double diff = total_variation(next, mu);
    mu = std::move(next);
    if (diff < kTol) break;
    if (prev_diff > 0.0) {
      const double ratio = diff / prev_diff;
      gap_estimate =
          gap_estimate == 0.0 ? ratio : 0.9 * gap_estimate + 0.1 * ratio;
    }
    prev_diff = diff;
  }
  if (iter == kMaxIter) {
    std::ostringstream os;
    os << "power iteration on P^" << k << " did not converge after "
       << kMaxIter << " iterations; estimated subdominant eigenvalue "
          "magnitude "
       << std::min(1.5, gap_estimate);
    throw DiagnosticError(os.str());
  }

  PeriodicDistribution out;
  out.iterations = iter + 1;
  out.phases.resize(k);
  out.phases[0] = mu;
  for (int l = 1; l < k; ++l) out.phases[l] = chain.propagate(out.phases[l - 1]);

  // Phase balance: the time average over phases must be stationary under P.
  const Eigen::VectorXd avg = out.time_average();
  out.balance_residual = total_variation(chain.propagate(avg), avg);
  AMG_CHECK_MSG(out.balance_residual < 1e-8, "phase balance residual");
  return out;
}

int recurrent_class_count(const JointChain& chain) {
  // Iterative Tarjan over the support graph, then count components with no
  // edge leaving them.
  const int n = chain.n_nodes();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0, n_comp = 0;

  struct Frame {
    int v;
    Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it;
  };

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames;
    frames.push_back({root, {chain.P, root}});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      Frame& f = frames.back();
      bool descended = false;
      for (; f.it; ++f.it) {
        const int w = static_cast<int>(f.it.col());
        if (index[w] == -1) {
          ++f.it;
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, {chain.P, w}});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
      }
      if (descended) continue;
      if (low[f.v] == index[f.v]) {
        while (true) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = n_comp;
          if (w == f.v) break;
        }
        ++n_comp;
      }
      const int v = f.v;
      frames.pop_back();
      if (!frames.empty())
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
    }
  }

  std::vector<bool> closed(n_comp, true);
  for (int i = 0; i < chain.P.outerSize(); ++i)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
             chain.P, i);
         it; ++it)
      if (comp[i] != comp[it.col()]) closed[comp[i]] = false;

  int recurrent = 0;
  for (bool c : closed) recurrent += c;
  return recurrent;
}

InitIndependenceReport check_init_independence(
    const MatrixGame& game, const ChainSpec& spec, int k,
    const std::vector<Eigen::VectorXd>& inits,
    const std::vector<double>& epsilons, double tol) {
  AMG_CHECK_MSG(inits.size() >= 2, "need at least two initial distributions");
  InitIndependenceReport report;
  report.pass = true;
  for (double eps : epsilons) {
    const JointChain chain = build_joint_chain(game, spec, eps);
    InitIndependenceRow row;
    row.epsilon = eps;
    row.all_converged = true;
    std::vector<Eigen::VectorXd> limits;
    for (const auto& init : inits) {
      try {
        limits.push_back(stationary_periodic(chain, k, init).time_average());
      } catch (const DiagnosticError&) {
        row.all_converged = false;
      }
    }
    for (size_t a = 0; a < limits.size(); ++a)
      for (size_t b = a + 1; b < limits.size(); ++b)
        row.max_pairwise_tv =
            std::max(row.max_pairwise_tv, total_variation(limits[a], limits[b]));
    if (!row.all_converged || row.max_pairwise_tv >= tol) report.pass = false;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace amg
