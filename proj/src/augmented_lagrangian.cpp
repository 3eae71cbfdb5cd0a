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

#include "chance_games/augmented_lagrangian.hpp"

#include <algorithm>

namespace chance_games {

MultiplierState MultiplierState::initial(std::vector<ConstraintSlot> slots,
                                         double initial_penalty, double growth,
                                         double penalty_cap) {
  if (!(initial_penalty > 0.0)) throw InvalidInputError("initial penalty must be positive");
  if (!(growth > 1.0)) throw InvalidInputError("penalty growth factor must exceed 1");
  MultiplierState s;
  s.lambda.assign(slots.size(), 0.0);
  s.mu.assign(slots.size(), initial_penalty);
  s.slots = std::move(slots);
  s.growth = growth;
  s.initial_penalty = initial_penalty;
  s.penalty_cap = penalty_cap;
  return s;
}

double penalty_gate(double c, double lambda, double mu) {
  return (c < 0.0 && lambda == 0.0) ? 0.0 : mu;
}

MultiplierState update_multipliers(const MultiplierState& state,
                                   std::span<const double> surrogate_values) {
  require_size(static_cast<Eigen::Index>(surrogate_values.size()),
               static_cast<Eigen::Index>(state.size()), "surrogate values");
  MultiplierState next = state;
  for (std::size_t s = 0; s < state.size(); ++s) {
    next.lambda[s] = std::max(0.0, state.lambda[s] + state.mu[s] * surrogate_values[s]);
    next.mu[s] = std::min(state.growth * state.mu[s], state.penalty_cap);
  }
  return next;
}

AlQuadraticTerms al_quadratic_terms(const LinearizedConstraint& lc, double lambda, double gate,
                                    const MatrixXd& covariance) {
  const VectorXd g = lc.G.transpose();
  const double offset = lc.q + lc.rho;
  AlQuadraticTerms t;
  t.Q = gate * (g * g.transpose());
  t.l = (lambda + gate * offset) * g;
  t.constant = lambda * offset + 0.5 * gate * offset * offset -
               0.5 * gate * g.dot(covariance * g);
  return t;
}

AlQuadraticTerms recenter(const AlQuadraticTerms& terms, const VectorXd& nominal) {
  AlQuadraticTerms t;
  t.Q = terms.Q;
  t.l = terms.l + terms.Q * nominal;
  t.constant = 0.5 * nominal.dot(terms.Q * nominal) + terms.l.dot(nominal) + terms.constant;
  return t;
}

double max_surrogate_violation(std::span<const double> surrogate_values) {
  double worst = 0.0;
  for (double c : surrogate_values) worst = std::max(worst, c);
  return worst;
}

}  // namespace chance_games
