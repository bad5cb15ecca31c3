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

#ifndef AMG_JOINT_CHAIN_HPP_
#define AMG_JOINT_CHAIN_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "amg/common.hpp"
#include "amg/matrix_game.hpp"

namespace amg {

// Discretization of the joint (state, opponent policy) space. The opponent
// is a q-learner whose table entries live on a small value grid; its
// deterministic update moves the visited entry one grid level toward the
// q-learning target. The row agent plays a fixed stochastic policy.
struct ChainSpec {
  std::vector<double> q_levels = {-3.0, 0.0, 3.0};
  // One q entry per (state, action) when true; one per action (shared across
  // states) when false. The shared form keeps node counts small.
  bool per_state_q = false;
  Eigen::MatrixXd row_policy;  // state x row-action, rows sum to 1; empty =
                               // uniform
  double q_lr = 0.5;
  double q_gamma = 0.9;
  int max_nodes = 100000;
};

// Explicit row-stochastic transition matrix over (state, policy) nodes.
// With perturbation epsilon the deterministic policy update is replaced by
// a uniformly random neighboring policy (one entry, one level) with
// probability epsilon.
struct JointChain {
  int n_states = 0;
  int n_policies = 0;
  int n_entries = 0;  // q-table entries per policy
  int n_levels = 0;
  double epsilon = 0.0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> P;

  int n_nodes() const { return n_states * n_policies; }
  int node(int state_idx, int policy_idx) const {
    return state_idx * n_policies + policy_idx;
  }

  // One distribution-propagation step: returns mu * P.
  Eigen::VectorXd propagate(const Eigen::VectorXd& mu) const;
};

// Decode/encode a policy index as per-entry level indices.
std::vector<int> levels_from_policy(const JointChain& chain, int policy_idx);
int policy_from_levels(const JointChain& chain, const std::vector<int>& lv);

JointChain build_joint_chain(const MatrixGame& game, const ChainSpec& spec,
                             double epsilon);

// The k phase distributions of the limiting periodic behavior, obtained by
// power iteration on P^k.
struct PeriodicDistribution {
  std::vector<Eigen::VectorXd> phases;
  long iterations = 0;
  double balance_residual = 0.0;

  Eigen::VectorXd time_average() const;
};

// Power iteration on P^k from `init` until successive iterates differ by
// less than 1e-10 in total variation. Throws DiagnosticError with a spectral
// gap estimate when 10^6 iterations do not converge, and verifies the phase
// balance residual is below 1e-8.
PeriodicDistribution stationary_periodic(const JointChain& chain, int k,
                                         const Eigen::VectorXd& init);

// Number of recurrent classes (closed strongly connected components) of the
// support graph.
int recurrent_class_count(const JointChain& chain);

struct InitIndependenceRow {
  double epsilon = 0.0;
  double max_pairwise_tv = 0.0;
  bool all_converged = false;
};

struct InitIndependenceReport {
  std::vector<InitIndependenceRow> rows;
  bool pass = false;
};

// Rebuilds the chain at each epsilon, computes the stationary periodic
// distribution from every initial distribution, and reports the largest
// pairwise total-variation distance (on time-averaged phases). Passes when
// every epsilon converged from all inits within `tol` of each other.
InitIndependenceReport check_init_independence(
    const MatrixGame& game, const ChainSpec& spec, int k,
    const std::vector<Eigen::VectorXd>& inits,
    const std::vector<double>& epsilons, double tol = 1e-6);

double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace amg

#endif  // AMG_JOINT_CHAIN_HPP_
