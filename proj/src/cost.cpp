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

#include "chance_games/cost.hpp"

#include "chance_games/dynamics.hpp"

#include <cmath>

namespace chance_games {

void PlayerCost::validate() const {
  if (lane.points().size() < 2) throw ValidationError("lane", "needs at least two points");
  auto nonneg = [](double w, const char* field) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError(field, "must be finite and >= 0");
  };
  nonneg(lane_weight, "lane_weight");
  nonneg(speed_weight, "speed_weight");
  nonneg(nominal_speed, "nominal_speed");
  nonneg(control_weights(0), "control_weights[0]");
  nonneg(control_weights(1), "control_weights[1]");
}

double running_cost(int player, const VectorXd& state, const ControlSet& controls,
                    const PlayerCost& cost) {
  const int o = kAgentStateDim * player;
  if (player < 0 || o + kAgentStateDim > state.size() ||
      player >= static_cast<int>(controls.size())) {
    throw InvalidInputError("running_cost: player index out of range");
  }
  const Eigen::Vector2d p = state.segment<2>(o);
  const double dv = state(o + kSpeedIndex) - cost.nominal_speed;
  const auto& u = controls[player];
  require_size(u.size(), kAgentControlDim, "control");
  return cost.lane_weight * cost.lane.project(p).squared_distance +
         cost.speed_weight * dv * dv + cost.control_weights(0) * u(0) * u(0) +
         cost.control_weights(1) * u(1) * u(1);
}

DrivingCost::DrivingCost(int player, int num_agents, PlayerCost params)
    : player_(player), num_agents_(num_agents), params_(std::move(params)) {
  if (player < 0 || player >= num_agents) throw InvalidInputError("player index out of range");
  params_.validate();
}

double DrivingCost::running(int, const VectorXd& x, const ControlSet& u) const {
  return running_cost(player_, x, u, params_);
}

double DrivingCost::terminal(const VectorXd& x) const { return expand_state(x).value; }

CostExpansion DrivingCost::expand_state(const VectorXd& x) const {
  const int n = kAgentStateDim * num_agents_;
  require_size(x.size(), n, "state");
  const int o = kAgentStateDim * player_;
  CostExpansion e;
  e.l = VectorXd::Zero(n);
  e.Q = MatrixXd::Zero(n, n);
  const auto proj = params_.lane.project(x.segment<2>(o));
  const double dv = x(o + kSpeedIndex) - params_.nominal_speed;
  e.value = params_.lane_weight * proj.squared_distance + params_.speed_weight * dv * dv;
  e.l.segment<2>(o) = params_.lane_weight * proj.gradient;
  e.Q.block<2, 2>(o, o) = params_.lane_weight * proj.hessian;
  e.l(o + kSpeedIndex) = 2.0 * params_.speed_weight * dv;
  e.Q(o + kSpeedIndex, o + kSpeedIndex) = 2.0 * params_.speed_weight;
  return e;
}

CostExpansion DrivingCost::expand_running(int, const VectorXd& x, const ControlSet& u) const {
  require_size(static_cast<Eigen::Index>(u.size()), num_agents_, "control set");
  CostExpansion e = expand_state(x);
  for (int j = 0; j < num_agents_; ++j) {
    require_size(u[j].size(), kAgentControlDim, "control");
    if (j == player_) {
      const Eigen::Vector2d w = params_.control_weights;
      e.value += w(0) * u[j](0) * u[j](0) + w(1) * u[j](1) * u[j](1);
      e.r.push_back(2.0 * w.cwiseProduct(u[j]));
      e.R.push_back(MatrixXd(2.0 * w.asDiagonal()));
    } else {
      e.r.push_back(VectorXd::Zero(kAgentControlDim));
      e.R.push_back(MatrixXd::Zero(kAgentControlDim, kAgentControlDim));
    }
  }
  return e;
}

CostExpansion DrivingCost::expand_terminal(const VectorXd& x) const { return expand_state(x); }

QuadraticCost::QuadraticCost(MatrixXd Q, VectorXd l, std::vector<MatrixXd> R,
                             std::vector<VectorXd> r, MatrixXd Q_terminal, VectorXd l_terminal)
    : Q_(std::move(Q)),
      l_(std::move(l)),
      R_(std::move(R)),
      r_(std::move(r)),
      Q_terminal_(std::move(Q_terminal)),
      l_terminal_(std::move(l_terminal)) {
  require_size(Q_.cols(), Q_.rows(), "Q");
  require_size(l_.size(), Q_.rows(), "l");
  require_size(static_cast<Eigen::Index>(r_.size()), static_cast<Eigen::Index>(R_.size()), "r");
  for (std::size_t j = 0; j < R_.size(); ++j) {
    require_size(R_[j].cols(), R_[j].rows(), "R");
    require_size(r_[j].size(), R_[j].rows(), "r");
  }
  require_size(Q_terminal_.rows(), Q_.rows(), "Q_terminal");
  require_size(l_terminal_.size(), Q_.rows(), "l_terminal");
}

double QuadraticCost::running(int, const VectorXd& x, const ControlSet& u) const {
  double c = 0.5 * x.dot(Q_ * x) + l_.dot(x);
  for (std::size_t j = 0; j < R_.size(); ++j) c += 0.5 * u[j].dot(R_[j] * u[j]) + r_[j].dot(u[j]);
  return c;
}

double QuadraticCost::terminal(const VectorXd& x) const {
  return 0.5 * x.dot(Q_terminal_ * x) + l_terminal_.dot(x);
}

CostExpansion QuadraticCost::expand_running(int k, const VectorXd& x, const ControlSet& u) const {
  CostExpansion e;
  e.value = running(k, x, u);
  e.l = Q_ * x + l_;
  e.Q = Q_;
  for (std::size_t j = 0; j < R_.size(); ++j) {
    e.r.push_back(R_[j] * u[j] + r_[j]);
    e.R.push_back(R_[j]);
  }
  return e;
}

CostExpansion QuadraticCost::expand_terminal(const VectorXd& x) const {
  CostExpansion e;
  e.value = terminal(x);
  e.l = Q_terminal_ * x + l_terminal_;
  e.Q = Q_terminal_;
  return e;
}

}  // namespace chance_games
