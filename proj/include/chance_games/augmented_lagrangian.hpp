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
#include "chance_games/game_spec.hpp"

#include <span>
#include <vector>

namespace chance_games {

// Multiplier and penalty per active (timestep, constraint) slot, aligned with
// GameSpec::constraint_slots() and linearize_chance_constraints().
struct MultiplierState {
  std::vector<ConstraintSlot> slots;
  std::vector<double> lambda;
  std::vector<double> mu;
  double growth = 5.0;            // phi > 1
  double initial_penalty = 10.0;  // mu_0 > 0
  double penalty_cap = 1e8;

  static MultiplierState initial(std::vector<ConstraintSlot> slots, double initial_penalty,
                                 double growth, double penalty_cap = 1e8);
  std::size_t size() const { return slots.size(); }
};

// 0 when the constraint is strictly satisfied and its multiplier is zero, mu otherwise.
double penalty_gate(double c, double lambda, double mu);

// lambda' = max(0, lambda + mu c), mu' = min(phi mu, cap), slot by slot.
MultiplierState update_multipliers(const MultiplierState& state,
                                   std::span<const double> surrogate_values);

// Quadratic in absolute state coordinates whose expectation under
// x ~ N(mean, covariance) equals lambda c + gate/2 c^2 with c = G mean + q + rho:
//   1/2 x^T Q x + l^T x + constant,
//   Q = gate G^T G, l = (lambda + gate (q + rho)) G^T,
//   constant = lambda (q + rho) + gate/2 (q + rho)^2 - gate/2 trace(G^T G Sigma).
struct AlQuadraticTerms {
  MatrixXd Q;
  VectorXd l;
  double constant = 0.0;
};

AlQuadraticTerms al_quadratic_terms(const LinearizedConstraint& lc, double lambda, double gate,
                                    const MatrixXd& covariance);

// Same terms re-expanded around `nominal` in dx = x - nominal.
AlQuadraticTerms recenter(const AlQuadraticTerms& terms, const VectorXd& nominal);

// max over slots of max(0, c); 0 for an empty set.
double max_surrogate_violation(std::span<const double> surrogate_values);

}  // namespace chance_games
