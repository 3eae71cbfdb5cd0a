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

#include "chance_games/dynamics.hpp"

#include <cmath>

namespace chance_games {

int Dynamics::total_control_dim() const {
  int total = 0;
  for (int j = 0; j < num_players(); ++j) total += control_dim(j);
  return total;
}

ControlSet Dynamics::zero_controls() const {
  ControlSet u;
  u.reserve(num_players());
  for (int j = 0; j < num_players(); ++j) u.push_back(VectorXd::Zero(control_dim(j)));
  return u;
}

void Dynamics::check_dimensions(const VectorXd& x, const ControlSet& u) const {
  require_size(x.size(), state_dim(), "state");
  require_size(static_cast<Eigen::Index>(u.size()), num_players(), "control set");
  for (int j = 0; j < num_players(); ++j) require_size(u[j].size(), control_dim(j), "control");
}

DynamicsLinearization Dynamics::linearize(const VectorXd& x, const ControlSet& u) const {
  return finite_difference_linearization(*this, x, u);
}

DynamicsLinearization finite_difference_linearization(const Dynamics& dynamics,
                                                      const VectorXd& x, const ControlSet& u,
                                                      double step) {
  dynamics.check_dimensions(x, u);
  const int n = dynamics.state_dim();
  const VectorXd w0 = VectorXd::Zero(dynamics.noise_dim());
  DynamicsLinearization lin;
  lin.A.resize(n, n);
  for (int c = 0; c < n; ++c) {
    VectorXd xp = x, xm = x;
    xp(c) += step;
    xm(c) -= step;
    lin.A.col(c) = (dynamics.step(xp, u, w0) - dynamics.step(xm, u, w0)) / (2.0 * step);
  }
  for (int j = 0; j < dynamics.num_players(); ++j) {
    MatrixXd Bj(n, dynamics.control_dim(j));
    for (int c = 0; c < Bj.cols(); ++c) {
      ControlSet up = u, um = u;
      up[j](c) += step;
      um[j](c) -= step;
      Bj.col(c) = (dynamics.step(x, up, w0) - dynamics.step(x, um, w0)) / (2.0 * step);
    }
    lin.B.push_back(std::move(Bj));
  }
  lin.W.resize(n, dynamics.noise_dim());
  for (int c = 0; c < dynamics.noise_dim(); ++c) {
    VectorXd wp = w0, wm = w0;
    wp(c) += step;
    wm(c) -= step;
    lin.W.col(c) = (dynamics.step(x, u, wp) - dynamics.step(x, u, wm)) / (2.0 * step);
  }
  return lin;
}

Eigen::Vector4d unicycle_step(const Eigen::Vector4d& state, const Eigen::Vector2d& control,
                              const Eigen::Vector4d& noise, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInputError("dt must be positive");
  if (!state.allFinite() || !control.allFinite() || !noise.allFinite()) {
    throw InvalidInputError("unicycle_step: non-finite input");
  }
  const double theta = state(2);
  const double v = state(3);
  Eigen::Vector4d next;
  next << state(0) + v * std::cos(theta) * dt, state(1) + v * std::sin(theta) * dt,
      theta + control(0) * dt, v + control(1) * dt;
  return next + noise;
}

VectorXd joint_step(const VectorXd& state, const ControlSet& controls, const VectorXd& noise,
                    double dt) {
  if (state.size() % kAgentStateDim != 0) {
    throw InvalidInputError("joint state length must be a multiple of 4");
  }
  const auto agents = state.size() / kAgentStateDim;
  require_size(static_cast<Eigen::Index>(controls.size()), agents, "control set");
  require_size(noise.size(), state.size(), "process noise");
  VectorXd next(state.size());
  for (Eigen::Index i = 0; i < agents; ++i) {
    require_size(controls[i].size(), kAgentControlDim, "agent control");
    next.segment<kAgentStateDim>(kAgentStateDim * i) =
        unicycle_step(state.segment<kAgentStateDim>(kAgentStateDim * i), controls[i],
                      noise.segment<kAgentStateDim>(kAgentStateDim * i), dt);
  }
  return next;
}

UnicycleDynamics::UnicycleDynamics(int num_agents, double dt) : num_agents_(num_agents), dt_(dt) {
  if (num_agents < 1) throw InvalidInputError("need at least one agent");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInputError("dt must be positive");
}

VectorXd UnicycleDynamics::step(const VectorXd& x, const ControlSet& u,
                                const VectorXd& w) const {
  check_dimensions(x, u);
  return joint_step(x, u, w, dt_);
}

DynamicsLinearization UnicycleDynamics::linearize(const VectorXd& x, const ControlSet& u) const {
  check_dimensions(x, u);
  require_finite(x, "nominal state");
  const int n = state_dim();
  DynamicsLinearization lin;
  lin.A = MatrixXd::Identity(n, n);
  lin.W = MatrixXd::Identity(n, n);
  for (int i = 0; i < num_agents_; ++i) {
    const int o = kAgentStateDim * i;
    const double theta = x(o + 2);
    const double v = x(o + 3);
    lin.A(o + 0, o + 2) = -v * std::sin(theta) * dt_;
    lin.A(o + 0, o + 3) = std::cos(theta) * dt_;
    lin.A(o + 1, o + 2) = v * std::cos(theta) * dt_;
    lin.A(o + 1, o + 3) = std::sin(theta) * dt_;
    MatrixXd Bi = MatrixXd::Zero(n, kAgentControlDim);
    Bi(o + 2, 0) = dt_;
    Bi(o + 3, 1) = dt_;
    lin.B.push_back(std::move(Bi));
  }
  return lin;
}

LinearDynamics::LinearDynamics(MatrixXd A, std::vector<MatrixXd> B, double dt)
    : A_(std::move(A)), B_(std::move(B)), dt_(dt) {
  if (A_.rows() != A_.cols()) throw InvalidInputError("A must be square");
  if (B_.empty()) throw InvalidInputError("need at least one player");
  for (const auto& b : B_) require_size(b.rows(), A_.rows(), "B rows");
}

VectorXd LinearDynamics::step(const VectorXd& x, const ControlSet& u, const VectorXd& w) const {
  check_dimensions(x, u);
  require_size(w.size(), state_dim(), "process noise");
  VectorXd next = A_ * x + w;
  for (std::size_t j = 0; j < B_.size(); ++j) next += B_[j] * u[j];
  return next;
}

DynamicsLinearization LinearDynamics::linearize(const VectorXd& x, const ControlSet& u) const {
  check_dimensions(x, u);
  return {A_, B_, MatrixXd::Identity(state_dim(), state_dim())};
}

}  // namespace chance_games
