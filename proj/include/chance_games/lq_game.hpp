/*
 * Copyright 2026 The chance_games Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "chance_games/common.hpp"

#include <vector>

namespace chance_games {

// Player i's stage cost in deviation coordinates:
//   1/2 x^T Q x + l^T x + sum_j (1/2 u_j^T R_j u_j + r_j^T u_j) + constant.
struct PlayerQuadratic {
  MatrixXd Q;
  VectorXd l;
  std::vector<MatrixXd> R;
  std::vector<VectorXd> r;
  double constant = 0.0;
};

struct TerminalQuadratic {
  MatrixXd Q;
  VectorXd l;
  double constant = 0.0;
};

// x_{k+1} = A x_k + sum_j B_j u_j with per-player stage costs.
struct LQGameStage {
  MatrixXd A;
  std::vector<MatrixXd> B;
  std::vector<PlayerQuadratic> players;
};

struct LQGame {
  std::vector<LQGameStage> stages;          // k = 0..L-1
  std::vector<TerminalQuadratic> terminal;  // per player, at k = L

  int horizon() const { return static_cast<int>(stages.size()); }
  int num_players() const { return static_cast<int>(terminal.size()); }
  // Dimensions consistent, R^{ii} positive definite (min eigenvalue > 1e-9), all finite.
  void validate() const;
};

// u_k = u_bar_k - P_k (x_k - x_bar_k) - alpha_k.
struct AffineFeedbackPolicy {
  std::vector<MatrixXd> gains;         // P_k, m x n
  std::vector<VectorXd> feedforwards;  // alpha_k, m

  int horizon() const { return static_cast<int>(gains.size()); }
  static AffineFeedbackPolicy zero(int horizon, int control_dim, int state_dim);
};

// V_k(x) = 1/2 x^T Z_k x + zeta_k^T x + constant_k for k = 0..L.
struct ValueFunction {
  std::vector<MatrixXd> Z;
  std::vector<VectorXd> zeta;
  std::vector<double> constant;

  double operator()(int k, const VectorXd& x) const {
    return 0.5 * x.dot(Z[k] * x) + zeta[k].dot(x) + constant[k];
  }
};

struct LQGameSolution {
  std::vector<AffineFeedbackPolicy> policies;
  std::vector<ValueFunction> values;
  double min_singular_value = 0.0;  // smallest over all stacked systems
};

// Feedback Nash equilibrium by backward induction. At each k the players'
// first-order conditions form one square system in (P_k^1..P_k^N, alpha_k^1..alpha_k^N)
// which is solved through an SVD; a smallest singular value below 1e-10 throws
// EquilibriumDegeneracyError. Stage constants only enter the value constants.
LQGameSolution solve_lq_game(const LQGame& game);

VectorXd apply_policy(const AffineFeedbackPolicy& policy, int k, const VectorXd& estimate,
                      const VectorXd& nominal_state, const VectorXd& nominal_control);

// Per-player total cost of the LQ game from initial deviation x0 when every
// player follows its policy (nominal = 0).
std::vector<double> lq_game_costs(const LQGame& game,
                                  const std::vector<AffineFeedbackPolicy>& policies,
                                  const VectorXd& x0);

}  // namespace chance_games
