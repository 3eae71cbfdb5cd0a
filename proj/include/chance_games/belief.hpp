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
#include "chance_games/dynamics.hpp"
#include "chance_games/game_spec.hpp"
#include "chance_games/measurement.hpp"

#include <vector>

namespace chance_games {

struct AffineFeedbackPolicy;

// Nominal means x_0..x_L, controls u_0..u_{L-1}, and the covariance schedule.
struct BeliefTrajectory {
  std::vector<VectorXd> means;
  std::vector<ControlSet> controls;
  std::vector<MatrixXd> covariances;

  int horizon() const { return static_cast<int>(controls.size()); }
  GaussianBelief belief(int k) const { return {means.at(k), covariances.at(k)}; }
};

DynamicsLinearization linearize_dynamics(const GameSpec& spec, const VectorXd& nominal_state,
                                         const ControlSet& nominal_controls);

MeasurementLinearization linearize_measurement(const GameSpec& spec,
                                               const VectorXd& nominal_next_state);

// Prior from the dynamics linearized at (nominal_state, nominal_controls):
//   mean = nominal_next + A (mean - nominal_state) + sum_j B_j (u_j - nominal_u_j)
//   cov  = A cov A^T + W Sigma_w W^T
GaussianBelief ekf_predict(const GaussianBelief& belief, const VectorXd& nominal_state,
                           const VectorXd& nominal_next_state, const ControlSet& nominal_controls,
                           const ControlSet& controls, const DynamicsLinearization& lin,
                           const MatrixXd& process_covariance);

// Kalman update with innovation y - (h_nominal + H (prior.mean - nominal_next_state)),
// Joseph-form covariance, symmetrized. A near-singular innovation covariance
// (min eigenvalue <= 1e-12) is regularized with 1e-12 I and reported through
// `regularized`; an innovation covariance that is not a covariance throws.
GaussianBelief ekf_update(const GaussianBelief& prior, const VectorXd& measurement,
                          const VectorXd& nominal_next_state, const VectorXd& h_nominal,
                          const MeasurementLinearization& lin,
                          const MatrixXd& measurement_covariance, bool* regularized = nullptr,
                          MatrixXd* gain = nullptr);

// Filter quantities along a nominal; they depend only on the nominal, never on
// the realized controls or measurements.
struct FilterSchedule {
  std::vector<DynamicsLinearization> dynamics;          // k = 0..L-1
  std::vector<MeasurementLinearization> measurements;   // for x_{k+1}, k = 0..L-1
  std::vector<VectorXd> nominal_measurements;           // h(x_{k+1}, 0)
  std::vector<MatrixXd> prior_covariances;              // k = 1..L stored at k-1
  std::vector<MatrixXd> gains;                          // K_{k+1} stored at k
  std::vector<MatrixXd> covariances;                    // Sigma_0..Sigma_L
  int regularized_updates = 0;
};

FilterSchedule build_filter_schedule(const GameSpec& spec, const BeliefTrajectory& nominal);

// Sigma_0..Sigma_L from alternating predict/update covariance recursions.
std::vector<MatrixXd> precompute_covariances(const GameSpec& spec,
                                             const BeliefTrajectory& nominal);

// Open-loop zero-noise rollout of a control sequence from the initial belief,
// with the covariance schedule attached.
BeliefTrajectory rollout_controls(const GameSpec& spec, const std::vector<ControlSet>& controls);

// Zero-noise closed-loop rollout: u_k = u_bar_k - P_k (x_k - x_bar_k) - scale * alpha_k,
// x_{k+1} = f(x_k, u_k, 0). The covariance schedule is recomputed on the result.
BeliefTrajectory rollout_zero_noise(const GameSpec& spec, const BeliefTrajectory& previous,
                                    const std::vector<AffineFeedbackPolicy>& policies,
                                    double feedforward_scale = 1.0,
                                    bool with_covariances = true);

}  // namespace chance_games
