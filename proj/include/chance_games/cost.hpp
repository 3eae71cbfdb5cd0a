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
#include "chance_games/geometry.hpp"

#include <vector>

namespace chance_games {

// Second-order expansion of one player's stage cost in (x, u^1..u^N), without
// state-control cross terms.
struct CostExpansion {
  double value = 0.0;
  VectorXd l;               // d c / d x
  MatrixXd Q;               // d^2 c / d x^2
  std::vector<VectorXd> r;  // d c / d u^j
  std::vector<MatrixXd> R;  // d^2 c / d (u^j)^2
};

// One player's running and terminal cost.
class CostModel {
 public:
  virtual ~CostModel() = default;
  virtual double running(int k, const VectorXd& x, const ControlSet& u) const = 0;
  virtual double terminal(const VectorXd& x) const = 0;
  virtual CostExpansion expand_running(int k, const VectorXd& x, const ControlSet& u) const = 0;
  // r and R are empty for the terminal expansion.
  virtual CostExpansion expand_terminal(const VectorXd& x) const = 0;
};

// Driving cost parameters for one player (who controls agent block `player`):
//   lane_weight * dist(p, lane)^2 + speed_weight * (v - nominal_speed)^2
//   + sum_c control_weights[c] * u_c^2.
// The terminal cost keeps the lane and speed terms.
struct PlayerCost {
  Polyline lane;
  double lane_weight = 1.0;
  double nominal_speed = 0.0;
  double speed_weight = 1.0;
  Eigen::Vector2d control_weights = Eigen::Vector2d::Ones();  // yaw rate, acceleration

  void validate() const;
  bool operator==(const PlayerCost&) const = default;
};

double running_cost(int player, const VectorXd& state, const ControlSet& controls,
                    const PlayerCost& cost);

class DrivingCost final : public CostModel {
 public:
  DrivingCost(int player, int num_agents, PlayerCost params);

  double running(int k, const VectorXd& x, const ControlSet& u) const override;
  double terminal(const VectorXd& x) const override;
  CostExpansion expand_running(int k, const VectorXd& x, const ControlSet& u) const override;
  CostExpansion expand_terminal(const VectorXd& x) const override;

  const PlayerCost& params() const { return params_; }
  int player() const { return player_; }

 private:
  CostExpansion expand_state(const VectorXd& x) const;

  int player_;
  int num_agents_;
  PlayerCost params_;
};

// Time-invariant quadratic cost
//   1/2 x^T Q x + l^T x + sum_j (1/2 u_j^T R_j u_j + r_j^T u_j),
// terminal 1/2 x^T Q_L x + l_L^T x.
class QuadraticCost final : public CostModel {
 public:
  QuadraticCost(MatrixXd Q, VectorXd l, std::vector<MatrixXd> R, std::vector<VectorXd> r,
                MatrixXd Q_terminal, VectorXd l_terminal);

  double running(int k, const VectorXd& x, const ControlSet& u) const override;
  double terminal(const VectorXd& x) const override;
  CostExpansion expand_running(int k, const VectorXd& x, const ControlSet& u) const override;
  CostExpansion expand_terminal(const VectorXd& x) const override;

 private:
  MatrixXd Q_;
  VectorXd l_;
  std::vector<MatrixXd> R_;
  std::vector<VectorXd> r_;
  MatrixXd Q_terminal_;
  VectorXd l_terminal_;
};

}  // namespace chance_games
