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

namespace chance_games {

struct MeasurementLinearization {
  MatrixXd H;  // z x n, d h / d x at (x_nominal, 0)
  MatrixXd V;  // z x s, d h / d v at (x_nominal, 0)
};

// Joint measurement y = h(x, v) shared by every player.
class MeasurementModel {
 public:
  virtual ~MeasurementModel() = default;
  virtual int state_dim() const = 0;
  virtual int measurement_dim() const = 0;
  virtual int noise_dim() const = 0;
  virtual VectorXd measure(const VectorXd& x, const VectorXd& v) const = 0;
  virtual MeasurementLinearization linearize(const VectorXd& x) const = 0;
};

// y^i = x^i + speed^i * v^i for each 4-dimensional agent block. The whole block
// is scaled by the agent's speed.
VectorXd speed_scaled_measurement(const VectorXd& state, const VectorXd& noise);

// y = x + v.
VectorXd additive_measurement(const VectorXd& state, const VectorXd& noise);

class SpeedScaledMeasurement final : public MeasurementModel {
 public:
  explicit SpeedScaledMeasurement(int num_agents);
  int state_dim() const override { return 4 * num_agents_; }
  int measurement_dim() const override { return state_dim(); }
  int noise_dim() const override { return state_dim(); }
  VectorXd measure(const VectorXd& x, const VectorXd& v) const override;
  // H = I; V = blockdiag(speed^i I_4).
  MeasurementLinearization linearize(const VectorXd& x) const override;

 private:
  int num_agents_;
};

class AdditiveMeasurement final : public MeasurementModel {
 public:
  explicit AdditiveMeasurement(int state_dim);
  int state_dim() const override { return dim_; }
  int measurement_dim() const override { return dim_; }
  int noise_dim() const override { return dim_; }
  VectorXd measure(const VectorXd& x, const VectorXd& v) const override;
  MeasurementLinearization linearize(const VectorXd& x) const override;

 private:
  int dim_;
};

}  // namespace chance_games
