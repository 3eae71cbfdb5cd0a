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

#include "chance_games/lq_game.hpp"

#include <Eigen/SVD>

#include <limits>
#include <string>

namespace chance_games {

void LQGame::validate() const {
  const int N = num_players();
  if (N < 1) throw InvalidInputError("LQ game needs at least one player");
  if (stages.empty()) throw InvalidInputError("LQ game needs at least one stage");
  const Eigen::Index n = stages.front().A.rows();
  for (int i = 0; i < N; ++i) {
    require_size(terminal[i].Q.rows(), n, "terminal Q");
    require_size(terminal[i].Q.cols(), n, "terminal Q");
    require_size(terminal[i].l.size(), n, "terminal l");
    require_finite(terminal[i].Q, "terminal Q");
    require_finite(terminal[i].l, "terminal l");
  }
  for (int k = 0; k < horizon(); ++k) {
    const auto& s = stages[k];
    require_size(s.A.rows(), n, "A");
    require_size(s.A.cols(), n, "A");
    require_finite(s.A, "A");
    require_size(static_cast<Eigen::Index>(s.B.size()), N, "B");
    require_size(static_cast<Eigen::Index>(s.players.size()), N, "stage players");
    for (int j = 0; j < N; ++j) {
      require_size(s.B[j].rows(), n, "B rows");
      require_finite(s.B[j], "B");
    }
    for (int i = 0; i < N; ++i) {
      const auto& p = s.players[i];
      require_size(p.Q.rows(), n, "Q");
      require_size(p.Q.cols(), n, "Q");
      require_size(p.l.size(), n, "l");
      require_finite(p.Q, "Q");
      require_finite(p.l, "l");
      require_size(static_cast<Eigen::Index>(p.R.size()), N, "R");
      require_size(static_cast<Eigen::Index>(p.r.size()), N, "r");
      for (int j = 0; j < N; ++j) {
        require_size(p.R[j].rows(), s.B[j].cols(), "R");
        require_size(p.R[j].cols(), s.B[j].cols(), "R");
        require_size(p.r[j].size(), s.B[j].cols(), "r");
        require_finite(p.R[j], "R");
        require_finite(p.r[j], "r");
      }
      if (min_symmetric_eigenvalue(p.R[i]) <= 1e-9) {
        throw InvalidInputError("R^{ii} must be positive definite (player " + std::to_string(i) +
                                ", timestep " + std::to_string(k) + ")");
      }
    }
  }
}

AffineFeedbackPolicy AffineFeedbackPolicy::zero(int horizon, int control_dim, int state_dim) {
  AffineFeedbackPolicy p;
  p.gains.assign(horizon, MatrixXd::Zero(control_dim, state_dim));
  p.feedforwards.assign(horizon, VectorXd::Zero(control_dim));
  return p;
}

LQGameSolution solve_lq_game(const LQGame& game) {
  game.validate();
  const int N = game.num_players();
  const int L = game.horizon();
  const Eigen::Index n = game.stages.front().A.rows();

  std::vector<Eigen::Index> offsets(N + 1, 0);
  for (int j = 0; j < N; ++j) offsets[j + 1] = offsets[j] + game.stages.front().B[j].cols();
  const Eigen::Index total_m = offsets[N];

  LQGameSolution sol;
  sol.min_singular_value = std::numeric_limits<double>::infinity();
  sol.policies.resize(N);
  sol.values.resize(N);
  for (int i = 0; i < N; ++i) {
    const auto m = offsets[i + 1] - offsets[i];
    sol.policies[i] = AffineFeedbackPolicy::zero(L, static_cast<int>(m), static_cast<int>(n));
    auto& v = sol.values[i];
    v.Z.resize(L + 1);
    v.zeta.resize(L + 1);
    v.constant.resize(L + 1);
    v.Z[L] = symmetrized(game.terminal[i].Q);
    v.zeta[L] = game.terminal[i].l;
    v.constant[L] = game.terminal[i].constant;
  }

  MatrixXd S(total_m, total_m);
  MatrixXd Y(total_m, n + 1);
  for (int k = L - 1; k >= 0; --k) {
    const auto& stage = game.stages[k];
    for (int i = 0; i < N; ++i) {
      const auto rows = Eigen::seqN(offsets[i], offsets[i + 1] - offsets[i]);
      const MatrixXd BtZ = stage.B[i].transpose() * sol.values[i].Z[k + 1];
      for (int j = 0; j < N; ++j) {
        const auto cols = Eigen::seqN(offsets[j], offsets[j + 1] - offsets[j]);
        S(rows, cols) = BtZ * stage.B[j];
        if (i == j) S(rows, cols) += stage.players[i].R[i];
      }
      Y(rows, Eigen::seqN(0, n)) = BtZ * stage.A;
      Y(rows, n) = stage.B[i].transpose() * sol.values[i].zeta[k + 1] + stage.players[i].r[i];
    }

    Eigen::JacobiSVD<MatrixXd> svd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues()(total_m - 1);
    sol.min_singular_value = std::min(sol.min_singular_value, smin);
    if (!(smin >= 1e-10)) throw EquilibriumDegeneracyError(k, smin);
    const MatrixXd X = svd.solve(Y);

    MatrixXd F = stage.A;
    VectorXd beta = VectorXd::Zero(n);
    for (int j = 0; j < N; ++j) {
      const auto rows = Eigen::seqN(offsets[j], offsets[j + 1] - offsets[j]);
      sol.policies[j].gains[k] = X(rows, Eigen::seqN(0, n));
      sol.policies[j].feedforwards[k] = X(rows, n);
      F -= stage.B[j] * sol.policies[j].gains[k];
      beta -= stage.B[j] * sol.policies[j].feedforwards[k];
    }

    for (int i = 0; i < N; ++i) {
      const auto& cost = stage.players[i];
      auto& v = sol.values[i];
      const MatrixXd& Z_next = v.Z[k + 1];
      const VectorXd& zeta_next = v.zeta[k + 1];
      MatrixXd Z = F.transpose() * Z_next * F + cost.Q;
      VectorXd zeta = F.transpose() * (zeta_next + Z_next * beta) + cost.l;
      double constant = v.constant[k + 1] + 0.5 * beta.dot(Z_next * beta) +
                        zeta_next.dot(beta) + cost.constant;
      for (int j = 0; j < N; ++j) {
        const MatrixXd& P = sol.policies[j].gains[k];
        const VectorXd& alpha = sol.policies[j].feedforwards[k];
        Z += P.transpose() * cost.R[j] * P;
        zeta += P.transpose() * (cost.R[j] * alpha - cost.r[j]);
        constant += 0.5 * alpha.dot(cost.R[j] * alpha) - cost.r[j].dot(alpha);
      }
      v.Z[k] = symmetrized(Z);
      v.zeta[k] = std::move(zeta);
      v.constant[k] = constant;
    }
  }
  return sol;
}

VectorXd apply_policy(const AffineFeedbackPolicy& policy, int k, const VectorXd& estimate,
                      const VectorXd& nominal_state, const VectorXd& nominal_control) {
  if (k < 0 || k >= policy.horizon()) throw InvalidInputError("policy timestep out of range");
  return nominal_control - policy.gains[k] * (estimate - nominal_state) - policy.feedforwards[k];
}

std::vector<double> lq_game_costs(const LQGame& game,
                                  const std::vector<AffineFeedbackPolicy>& policies,
                                  const VectorXd& x0) {
  const int N = game.num_players();
  std::vector<double> costs(N, 0.0);
  VectorXd x = x0;
  ControlSet u(N);
  for (int k = 0; k < game.horizon(); ++k) {
    const auto& stage = game.stages[k];
    for (int j = 0; j < N; ++j) {
      u[j] = -policies[j].gains[k] * x - policies[j].feedforwards[k];
    }
    for (int i = 0; i < N; ++i) {
      const auto& c = stage.players[i];
      costs[i] += 0.5 * x.dot(c.Q * x) + c.l.dot(x) + c.constant;
      for (int j = 0; j < N; ++j) costs[i] += 0.5 * u[j].dot(c.R[j] * u[j]) + c.r[j].dot(u[j]);
    }
    VectorXd next = stage.A * x;
    for (int j = 0; j < N; ++j) next += stage.B[j] * u[j];
    x = std::move(next);
  }
  for (int i = 0; i < N; ++i) {
    costs[i] += 0.5 * x.dot(game.terminal[i].Q * x) + game.terminal[i].l.dot(x) +
                game.terminal[i].constant;
  }
  return costs;
}

}  // namespace chance_games
