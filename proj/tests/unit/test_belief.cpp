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
#include "chance_games/cost.hpp"
#include "chance_games/dynamics.hpp"
#include "chance_games/game_spec.hpp"
#include "chance_games/lq_game.hpp"
#include "chance_games/measurement.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <memory>
#include <random>

namespace cg = chance_games;
namespace oracle = chance_games::oracle;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct LinearSetup {
  MatrixXd A;
  std::vector<MatrixXd> B;
  cg::GameSpec spec;
};

LinearSetup linear_setup(unsigned seed, int horizon = 6) {
  std::mt19937_64 rng(seed);
  LinearSetup s;
  const int n = 3;
  s.A = MatrixXd::Identity(n, n) + oracle::random_matrix(rng, n, n, 0.2);
  s.B = {oracle::random_matrix(rng, n, 1), oracle::random_matrix(rng, n, 2)};
  s.spec.dynamics = std::make_shared<cg::LinearDynamics>(s.A, s.B);
  s.spec.measurement = std::make_shared<cg::AdditiveMeasurement>(n);
  for (int i = 0; i < 2; ++i) {
    std::vector<MatrixXd> R = {MatrixXd::Identity(1, 1), MatrixXd::Identity(2, 2)};
    std::vector<VectorXd> r = {VectorXd::Zero(1), VectorXd::Zero(2)};
    s.spec.costs.push_back(std::make_shared<cg::QuadraticCost>(
        MatrixXd::Identity(n, n), VectorXd::Zero(n), R, r, MatrixXd::Identity(n, n),
        VectorXd::Zero(n)));
  }
  s.spec.noise.process = oracle::random_spd(rng, n, 0.05);
  s.spec.noise.measurement = oracle::random_spd(rng, n, 0.05);
  s.spec.initial_belief.mean = oracle::random_matrix(rng, n, 1);
  s.spec.initial_belief.covariance = oracle::random_spd(rng, n, 0.1);
  s.spec.horizon = horizon;
  s.spec.validate();
  return s;
}

std::vector<cg::ControlSet> zero_controls(const cg::GameSpec& spec) {
  return std::vector<cg::ControlSet>(spec.horizon, spec.dynamics->zero_controls());
}

TEST(Ekf, PredictMatchesLinearPropagation) {
  const LinearSetup s = linear_setup(1);
  const auto& spec = s.spec;
  const VectorXd nominal = VectorXd::Constant(3, 0.3);
  const cg::ControlSet ubar = {VectorXd::Constant(1, 0.1), VectorXd::Constant(2, -0.2)};
  const cg::ControlSet u = {VectorXd::Constant(1, 0.5), VectorXd::Constant(2, 0.4)};
  const VectorXd next = s.A * nominal + s.B[0] * ubar[0] + s.B[1] * ubar[1];
  const auto lin = cg::linearize_dynamics(spec, nominal, ubar);
  const auto prior = cg::ekf_predict(spec.initial_belief, nominal, next, ubar, u, lin,
                                     spec.noise.process);
  const VectorXd& m = spec.initial_belief.mean;
  EXPECT_TRUE(prior.mean.isApprox(s.A * m + s.B[0] * u[0] + s.B[1] * u[1], 1e-12));
  EXPECT_TRUE(prior.covariance.isApprox(
      s.A * spec.initial_belief.covariance * s.A.transpose() + spec.noise.process, 1e-12));
}

TEST(Ekf, UpdateMatchesBayesPosterior) {
  std::mt19937_64 rng(3);
  const int n = 3;
  const cg::AdditiveMeasurement model(n);
  const cg::GaussianBelief prior{oracle::random_matrix(rng, n, 1), oracle::random_spd(rng, n)};
  const MatrixXd Sv = oracle::random_spd(rng, n);
  const VectorXd y = oracle::random_matrix(rng, n, 1);
  const VectorXd nominal = oracle::random_matrix(rng, n, 1);
  bool regularized = true;
  const auto post = cg::ekf_update(prior, y, nominal, model.measure(nominal, VectorXd::Zero(n)),
                                   model.linearize(nominal), Sv, &regularized);
  EXPECT_FALSE(regularized);
  // Information form of the posterior.
  const MatrixXd info = prior.covariance.inverse() + Sv.inverse();
  const MatrixXd cov = info.inverse();
  const VectorXd mean = cov * (prior.covariance.inverse() * prior.mean + Sv.inverse() * y);
  EXPECT_TRUE(post.covariance.isApprox(cov, 1e-10));
  EXPECT_TRUE(post.mean.isApprox(mean, 1e-10));
  EXPECT_TRUE(post.covariance.isApprox(post.covariance.transpose()));
}

TEST(Ekf, SingularInnovationIsRegularized) {
  const int n = 2;
  const cg::AdditiveMeasurement model(n);
  const cg::GaussianBelief prior{VectorXd::Zero(n), MatrixXd::Zero(n, n)};
  bool regularized = false;
  const auto post =
      cg::ekf_update(prior, VectorXd::Ones(n), VectorXd::Zero(n), VectorXd::Zero(n),
                     model.linearize(VectorXd::Zero(n)), MatrixXd::Zero(n, n), &regularized);
  EXPECT_TRUE(regularized);
  EXPECT_TRUE(post.covariance.allFinite());
  EXPECT_TRUE(post.mean.allFinite());
}

TEST(CovarianceSchedule, MatchesInformationFilter) {
  for (unsigned seed : {5u, 6u, 7u}) {
    const LinearSetup s = linear_setup(seed);
    const auto traj = cg::rollout_controls(s.spec, zero_controls(s.spec));
    const auto ref = oracle::information_filter(s.A, s.spec.initial_belief.covariance,
                                                s.spec.noise.process, s.spec.noise.measurement,
                                                s.spec.horizon);
    ASSERT_EQ(traj.covariances.size(), ref.posterior.size());
    for (std::size_t k = 0; k < ref.posterior.size(); ++k) {
      EXPECT_TRUE(traj.covariances[k].isApprox(ref.posterior[k], 1e-10)) << "k=" << k;
    }
    const auto filter = cg::build_filter_schedule(s.spec, traj);
    for (int k = 0; k < s.spec.horizon; ++k) {
      EXPECT_TRUE(filter.gains[k].isApprox(ref.gain[k], 1e-10));
      EXPECT_TRUE(filter.prior_covariances[k].isApprox(ref.prior[k], 1e-10));
    }
    EXPECT_EQ(filter.regularized_updates, 0);
  }
}

TEST(CovarianceSchedule, IndependentOfControlsForLinearModels) {
  const LinearSetup s = linear_setup(9);
  auto controls = zero_controls(s.spec);
  for (auto& u : controls) u[1] = VectorXd::Constant(2, 3.0);
  const auto a = cg::rollout_controls(s.spec, zero_controls(s.spec));
  const auto b = cg::rollout_controls(s.spec, controls);
  for (std::size_t k = 0; k < a.covariances.size(); ++k) {
    EXPECT_TRUE(a.covariances[k].isApprox(b.covariances[k], 1e-12));
  }
}

TEST(Rollout, OpenLoopFollowsDynamics) {
  const LinearSetup s = linear_setup(2);
  auto controls = zero_controls(s.spec);
  controls[2][0] = VectorXd::Constant(1, 1.0);
  const auto traj = cg::rollout_controls(s.spec, controls);
  ASSERT_EQ(traj.horizon(), s.spec.horizon);
  VectorXd x = s.spec.initial_belief.mean;
  for (int k = 0; k < s.spec.horizon; ++k) {
    x = s.A * x + s.B[0] * controls[k][0] + s.B[1] * controls[k][1];
    EXPECT_TRUE(traj.means[k + 1].isApprox(x, 1e-12));
  }
}

TEST(Rollout, ZeroPoliciesReproduceTheNominal) {
  const LinearSetup s = linear_setup(4);
  auto controls = zero_controls(s.spec);
  controls[1][1] = VectorXd::Constant(2, -0.5);
  const auto nominal = cg::rollout_controls(s.spec, controls);
  const std::vector<cg::AffineFeedbackPolicy> zero = {cg::AffineFeedbackPolicy::zero(6, 1, 3),
                                                      cg::AffineFeedbackPolicy::zero(6, 2, 3)};
  const auto again = cg::rollout_zero_noise(s.spec, nominal, zero);
  for (int k = 0; k <= s.spec.horizon; ++k) {
    EXPECT_TRUE(again.means[k].isApprox(nominal.means[k], 1e-12));
  }
}

TEST(Rollout, FeedforwardScaleShiftsControls) {
  const LinearSetup s = linear_setup(4);
  const auto nominal = cg::rollout_controls(s.spec, zero_controls(s.spec));
  auto p0 = cg::AffineFeedbackPolicy::zero(6, 1, 3);
  auto p1 = cg::AffineFeedbackPolicy::zero(6, 2, 3);
  p0.feedforwards[0] = VectorXd::Constant(1, 2.0);
  const auto half = cg::rollout_zero_noise(s.spec, nominal, {p0, p1}, 0.5, false);
  EXPECT_NEAR(half.controls[0][0](0), -1.0, 1e-12);
}

}  // namespace
