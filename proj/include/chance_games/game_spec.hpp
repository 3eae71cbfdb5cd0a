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
#include "chance_games/constraints.hpp"
#include "chance_games/cost.hpp"
#include "chance_games/dynamics.hpp"
#include "chance_games/measurement.hpp"

#include <memory>
#include <vector>

namespace chance_games {

struct GaussianBelief {
  VectorXd mean;
  MatrixXd covariance;
};

struct NoiseSpec {
  MatrixXd process;      // Sigma_w, d x d
  MatrixXd measurement;  // Sigma_v, s x s
};

// (timestep, constraint index) pair carrying one multiplier.
struct ConstraintSlot {
  int timestep = 0;
  int index = 0;
  bool operator==(const ConstraintSlot&) const = default;
};

// Everything that defines a chance-constrained stochastic game. The model
// objects are shared and immutable.
struct GameSpec {
  std::shared_ptr<const Dynamics> dynamics;
  std::shared_ptr<const MeasurementModel> measurement;
  std::vector<std::shared_ptr<const CostModel>> costs;  // one per player
  std::vector<ChanceConstraint> constraints;
  NoiseSpec noise;
  GaussianBelief initial_belief;
  int horizon = 1;  // L

  int num_players() const { return dynamics->num_players(); }
  int state_dim() const { return dynamics->state_dim(); }
  double dt() const { return dynamics->dt(); }

  // Throws ValidationError naming the offending field.
  void validate() const;

  // Active (timestep, constraint) pairs, timestep-major.
  std::vector<ConstraintSlot> constraint_slots() const;
};

// Symmetric within 1e-9 and min eigenvalue >= -1e-9.
bool is_covariance(const MatrixXd& m);

}  // namespace chance_games
