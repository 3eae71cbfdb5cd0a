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

// Jacobians of x_{k+1} = f(x_k, u_k^{1:N}, w_k) at a nominal point with w = 0.
struct DynamicsLinearization {
  MatrixXd A;               // n x n
  std::vector<MatrixXd> B;  // per player, n x m_j
  MatrixXd W;               // n x d
};

// Discrete-time joint dynamics for N players sharing one state vector.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  virtual int state_dim() const = 0;
  virtual int noise_dim() const { return state_dim(); }
  virtual int num_players() const = 0;
  virtual int control_dim(int player) const = 0;
  virtual double dt() const = 0;

  virtual VectorXd step(const VectorXd& x, const ControlSet& u, const VectorXd& w) const = 0;

  // Central finite differences unless overridden with analytic Jacobians.
  virtual DynamicsLinearization linearize(const VectorXd& x, const ControlSet& u) const;

  int total_control_dim() const;
  ControlSet zero_controls() const;
  void check_dimensions(const VectorXd& x, const ControlSet& u) const;
};

DynamicsLinearization finite_difference_linearization(const Dynamics& dynamics,
                                                      const VectorXd& x, const ControlSet& u,
                                                      double step = 1e-6);

// Per-agent state layout of the unicycle model.
inline constexpr int kAgentStateDim = 4;    // x, y, heading, speed
inline constexpr int kAgentControlDim = 2;  // yaw rate, acceleration
inline constexpr int kSpeedIndex = 3;

// Explicit Euler step of the unicycle:
//   [x + v cos(th) dt, y + v sin(th) dt, th + w dt, v + a dt] + noise.
Eigen::Vector4d unicycle_step(const Eigen::Vector4d& state, const Eigen::Vector2d& control,
                              const Eigen::Vector4d& noise, double dt);

// Block-wise unicycle step over N agents; noise enters additively on the full state.
VectorXd joint_step(const VectorXd& state, const ControlSet& controls, const VectorXd& noise,
                    double dt);

class UnicycleDynamics final : public Dynamics {
 public:
  UnicycleDynamics(int num_agents, double dt);

  int state_dim() const override { return kAgentStateDim * num_agents_; }
  int num_players() const override { return num_agents_; }
  int control_dim(int) const override { return kAgentControlDim; }
  double dt() const override { return dt_; }

  VectorXd step(const VectorXd& x, const ControlSet& u, const VectorXd& w) const override;
  DynamicsLinearization linearize(const VectorXd& x, const ControlSet& u) const override;

 private:
  int num_agents_;
  double dt_;
};

// x_{k+1} = A x_k + sum_j B_j u_j + w_k. Mostly useful for tests and LQG checks.
class LinearDynamics final : public Dynamics {
 public:
  LinearDynamics(MatrixXd A, std::vector<MatrixXd> B, double dt = 1.0);

  int state_dim() const override { return static_cast<int>(A_.rows()); }
  int num_players() const override { return static_cast<int>(B_.size()); }
  int control_dim(int player) const override { return static_cast<int>(B_.at(player).cols()); }
  double dt() const override { return dt_; }

  VectorXd step(const VectorXd& x, const ControlSet& u, const VectorXd& w) const override;
  DynamicsLinearization linearize(const VectorXd& x, const ControlSet& u) const override;

  const MatrixXd& A() const { return A_; }
  const std::vector<MatrixXd>& B() const { return B_; }

 private:
  MatrixXd A_;
  std::vector<MatrixXd> B_;
  double dt_;
};

}  // namespace chance_games
