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

#include "chance_games/belief.hpp"

#include "chance_games/lq_game.hpp"

namespace chance_games {

DynamicsLinearization linearize_dynamics(const GameSpec& spec, const VectorXd& nominal_state,
                                         const ControlSet& nominal_controls) {
  require_finite(nominal_state, "nominal state");
  return spec.dynamics->linearize(nominal_state, nominal_controls);
}

MeasurementLinearization linearize_measurement(const GameSpec& spec,
                                               const VectorXd& nominal_next_state) {
  require_finite(nominal_next_state, "nominal state");
  return spec.measurement->linearize(nominal_next_state);
}

GaussianBelief ekf_predict(const GaussianBelief& belief, const VectorXd& nominal_state,
                           const VectorXd& nominal_next_state, const ControlSet& nominal_controls,
                           const ControlSet& controls, const DynamicsLinearization& lin,
                           const MatrixXd& process_covariance) {
  require_size(static_cast<Eigen::Index>(controls.size()),
               static_cast<Eigen::Index>(lin.B.size()), "controls");
  GaussianBelief prior;
  prior.mean = nominal_next_state + lin.A * (belief.mean - nominal_state);
  for (std::size_t j = 0; j < lin.B.size(); ++j) {
    prior.mean += lin.B[j] * (controls[j] - nominal_controls[j]);
  }
  prior.covariance = symmetrized(lin.A * belief.covariance * lin.A.transpose() +
                                 lin.W * process_covariance * lin.W.transpose());
  return prior;
}

GaussianBelief ekf_update(const GaussianBelief& prior, const VectorXd& measurement,
                          const VectorXd& nominal_next_state, const VectorXd& h_nominal,
                          const MeasurementLinearization& lin,
                          const MatrixXd& measurement_covariance, bool* regularized,
                          MatrixXd* gain) {
  const MatrixXd& H = lin.H;
  const MatrixXd& V = lin.V;
  const MatrixXd noise = V * measurement_covariance * V.transpose();
  MatrixXd S = symmetrized(H * prior.covariance * H.transpose() + noise);
  if (!S.allFinite()) throw NumericalError("innovation covariance has non-finite entries");
  const double min_eig = min_symmetric_eigenvalue(S);
  if (min_eig < -1e-9) {
    throw NumericalError("innovation covariance is not positive semidefinite (min eigenvalue " +
                         std::to_string(min_eig) + ")");
  }
  bool jitter = min_eig <= 1e-12;
  if (jitter) S += 1e-12 * MatrixXd::Identity(S.rows(), S.cols());
  if (regularized) *regularized = jitter;

  // K = Sigma^p H^T S^-1, computed as (S^-1 H Sigma^p)^T.
  const MatrixXd K = S.ldlt().solve(H * prior.covariance).transpose();
  const VectorXd innovation =
      measurement - (h_nominal + H * (prior.mean - nominal_next_state));
  GaussianBelief post;
  post.mean = prior.mean + K * innovation;
  const MatrixXd I_KH = MatrixXd::Identity(K.rows(), K.rows()) - K * H;
  post.covariance = symmetrized(I_KH * prior.covariance * I_KH.transpose() +
                                K * noise * K.transpose());
  if (gain) *gain = K;
  return post;
}

FilterSchedule build_filter_schedule(const GameSpec& spec, const BeliefTrajectory& nominal) {
  const int L = spec.horizon;
  require_size(static_cast<Eigen::Index>(nominal.means.size()), L + 1, "nominal means");
  require_size(static_cast<Eigen::Index>(nominal.controls.size()), L, "nominal controls");
  FilterSchedule s;
  s.covariances.reserve(L + 1);
  s.covariances.push_back(spec.initial_belief.covariance);
  const VectorXd zero_v = VectorXd::Zero(spec.measurement->noise_dim());
  GaussianBelief b{nominal.means[0], spec.initial_belief.covariance};
  for (int k = 0; k < L; ++k) {
    auto dyn = linearize_dynamics(spec, nominal.means[k], nominal.controls[k]);
    auto meas = linearize_measurement(spec, nominal.means[k + 1]);
    VectorXd h_nominal = spec.measurement->measure(nominal.means[k + 1], zero_v);
    GaussianBelief prior = ekf_predict(b, nominal.means[k], nominal.means[k + 1],
                                       nominal.controls[k], nominal.controls[k], dyn,
                                       spec.noise.process);
    bool jitter = false;
    MatrixXd K;
    // The nominal measurement yields a zero innovation; only the covariance matters here.
    b = ekf_update(prior, h_nominal, nominal.means[k + 1], h_nominal, meas,
                   spec.noise.measurement, &jitter, &K);
    if (jitter) ++s.regularized_updates;
    s.prior_covariances.push_back(prior.covariance);
    s.gains.push_back(std::move(K));
    s.covariances.push_back(b.covariance);
    s.dynamics.push_back(std::move(dyn));
    s.measurements.push_back(std::move(meas));
    s.nominal_measurements.push_back(std::move(h_nominal));
  }
  return s;
}

std::vector<MatrixXd> precompute_covariances(const GameSpec& spec,
                                             const BeliefTrajectory& nominal) {
  return build_filter_schedule(spec, nominal).covariances;
}

BeliefTrajectory rollout_controls(const GameSpec& spec, const std::vector<ControlSet>& controls) {
  require_size(static_cast<Eigen::Index>(controls.size()), spec.horizon, "control sequence");
  BeliefTrajectory t;
  t.controls = controls;
  t.means.reserve(spec.horizon + 1);
  t.means.push_back(spec.initial_belief.mean);
  const VectorXd w0 = VectorXd::Zero(spec.dynamics->noise_dim());
  for (int k = 0; k < spec.horizon; ++k) {
    t.means.push_back(spec.dynamics->step(t.means[k], controls[k], w0));
  }
  t.covariances = precompute_covariances(spec, t);
  return t;
}

BeliefTrajectory rollout_zero_noise(const GameSpec& spec, const BeliefTrajectory& previous,
                                    const std::vector<AffineFeedbackPolicy>& policies,
                                    double feedforward_scale, bool with_covariances) {
  const int L = spec.horizon;
  require_size(static_cast<Eigen::Index>(policies.size()), spec.num_players(), "policies");
  for (const auto& p : policies) require_size(p.horizon(), L, "policy horizon");
  BeliefTrajectory t;
  t.means.reserve(L + 1);
  t.controls.reserve(L);
  t.means.push_back(spec.initial_belief.mean);
  const VectorXd w0 = VectorXd::Zero(spec.dynamics->noise_dim());
  for (int k = 0; k < L; ++k) {
    ControlSet u(spec.num_players());
    for (int i = 0; i < spec.num_players(); ++i) {
      const auto& pol = policies[i];
      u[i] = previous.controls[k][i] - pol.gains[k] * (t.means[k] - previous.means[k]) -
             feedforward_scale * pol.feedforwards[k];
    }
    t.means.push_back(spec.dynamics->step(t.means[k], u, w0));
    t.controls.push_back(std::move(u));
  }
  if (with_covariances) t.covariances = precompute_covariances(spec, t);
  return t;
}

}  // namespace chance_games
