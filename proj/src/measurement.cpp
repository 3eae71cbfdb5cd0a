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

#include "chance_games/measurement.hpp"

#include "chance_games/dynamics.hpp"

namespace chance_games {

VectorXd speed_scaled_measurement(const VectorXd& state, const VectorXd& noise) {
  require_size(noise.size(), state.size(), "measurement noise");
  if (state.size() % kAgentStateDim != 0) {
    throw InvalidInputError("joint state length must be a multiple of 4");
  }
  VectorXd y = state;
  for (Eigen::Index o = 0; o < state.size(); o += kAgentStateDim) {
    const double speed = state(o + kSpeedIndex);
    y.segment<kAgentStateDim>(o) += speed * noise.segment<kAgentStateDim>(o);
  }
  return y;
}

VectorXd additive_measurement(const VectorXd& state, const VectorXd& noise) {
  require_size(noise.size(), state.size(), "measurement noise");
  return state + noise;
}

SpeedScaledMeasurement::SpeedScaledMeasurement(int num_agents) : num_agents_(num_agents) {
  if (num_agents < 1) throw InvalidInputError("need at least one agent");
}

VectorXd SpeedScaledMeasurement::measure(const VectorXd& x, const VectorXd& v) const {
  require_size(x.size(), state_dim(), "state");
  return speed_scaled_measurement(x, v);
}

MeasurementLinearization SpeedScaledMeasurement::linearize(const VectorXd& x) const {
  require_size(x.size(), state_dim(), "state");
  require_finite(x, "nominal state");
  const int n = state_dim();
  MeasurementLinearization lin{MatrixXd::Identity(n, n), MatrixXd::Zero(n, n)};
  for (int i = 0; i < num_agents_; ++i) {
    const int o = kAgentStateDim * i;
    lin.V.block<kAgentStateDim, kAgentStateDim>(o, o).diagonal().setConstant(x(o + kSpeedIndex));
  }
  return lin;
}

AdditiveMeasurement::AdditiveMeasurement(int state_dim) : dim_(state_dim) {
  if (state_dim < 1) throw InvalidInputError("state dimension must be positive");
}

VectorXd AdditiveMeasurement::measure(const VectorXd& x, const VectorXd& v) const {
  require_size(x.size(), dim_, "state");
  return additive_measurement(x, v);
}

MeasurementLinearization AdditiveMeasurement::linearize(const VectorXd& x) const {
  require_size(x.size(), dim_, "state");
  return {MatrixXd::Identity(dim_, dim_), MatrixXd::Identity(dim_, dim_)};
}

}  // namespace chance_games
