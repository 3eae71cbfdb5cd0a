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


#include "chance_games/cost.hpp"
#include "chance_games/dynamics.hpp"
#include "chance_games/game_spec.hpp"
#include "chance_games/geometry.hpp"
#include "chance_games/measurement.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

namespace cg = chance_games;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector4d;
using Eigen::VectorXd;

namespace {

TEST(Polyline, InteriorProjection) {
  const cg::Polyline lane({{0.0, 0.0}, {2.0, 0.0}});
  const auto pr = lane.project({1.0, 1.0});
  EXPECT_DOUBLE_EQ(pr.squared_distance, 1.0);
  EXPECT_TRUE(pr.closest.isApprox(Vector2d(1.0, 0.0)));
  EXPECT_TRUE(pr.gradient.isApprox(Vector2d(0.0, 2.0)));
  EXPECT_TRUE(pr.hessian.isApprox((Eigen::Matrix2d() << 0.0, 0.0, 0.0, 2.0).finished()));
}

TEST(Polyline, VertexProjection) {
  const cg::Polyline lane({{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}});
  const auto before = lane.project({-1.0, 1.0});
  EXPECT_DOUBLE_EQ(before.squared_distance, 2.0);
  EXPECT_TRUE(before.hessian.isApprox(2.0 * Eigen::Matrix2d::Identity()));
  // Outside the corner (2, 0).
  const auto corner = lane.project({3.0, -1.0});
  EXPECT_DOUBLE_EQ(corner.squared_distance, 2.0);
  EXPECT_TRUE(corner.closest.isApprox(Vector2d(2.0, 0.0)));
  EXPECT_DOUBLE_EQ(lane.distance({3.0, 1.0}), 1.0);
}

TEST(Polyline, RejectsDegenerateInput) {
  EXPECT_THROW(cg::Polyline({{0.0, 0.0}}), cg::InvalidInputError);
  EXPECT_THROW(cg::Polyline({{0.0, 0.0}, {0.0, 0.0}}), cg::InvalidInputError);
}

TEST(Obstacles, DiscHalfspace) {
  const cg::ObstacleShape disc = cg::Disc{Vector2d::Zero(), 1.0};
  const Vector2d p(3.0, 0.0);
  const auto h = cg::nearest_supporting_halfspace(disc, p);
  EXPECT_DOUBLE_EQ(h.signed_distance, 2.0);
  EXPECT_TRUE(h.normal.isApprox(Vector2d(-1.0, 0.0)));
  EXPECT_NEAR(h.normal.dot(p) - h.offset, -2.0, 1e-12);
}

TEST(Obstacles, SquareInsideAndOutside) {
  const cg::ObstacleShape square =
      cg::ConvexPolygon{{{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}}};
  const auto out = cg::nearest_supporting_halfspace(square, {3.0, 1.0});
  EXPECT_NEAR(out.signed_distance, 1.0, 1e-12);
  EXPECT_TRUE(out.normal.isApprox(Vector2d(-1.0, 0.0)));
  const auto in = cg::nearest_supporting_halfspace(square, {1.0, 0.25});
  EXPECT_NEAR(in.signed_distance, -0.25, 1e-12);
  // Past a corner the nearest boundary point is the vertex.
  const auto corner = cg::nearest_supporting_halfspace(square, {3.0, 3.0});
  EXPECT_NEAR(corner.signed_distance, std::sqrt(2.0), 1e-12);
}

TEST(Obstacles, ValidateShape) {
  EXPECT_THROW(cg::validate_shape(cg::Disc{Vector2d::Zero(), 0.0}), cg::InvalidInputError);
  // Clockwise.
  EXPECT_THROW(cg::validate_shape(cg::ConvexPolygon{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}),
               cg::InvalidInputError);
  EXPECT_THROW(cg::validate_shape(cg::ConvexPolygon{{{0, 0}, {2, 0}, {1, 0.2}, {1, 2}}}),
               cg::InvalidInputError);
  EXPECT_NO_THROW(cg::validate_shape(cg::ConvexPolygon{{{0, 0}, {1, 0}, {0, 1}}}));
}

TEST(Unicycle, EulerStep) {
  const Vector4d x(1.0, 2.0, M_PI / 2.0, 3.0);
  const Vector4d next = cg::unicycle_step(x, Vector2d(0.5, -1.0), Vector4d::Zero(), 0.1);
  EXPECT_NEAR(next(0), 1.0, 1e-12);
  EXPECT_NEAR(next(1), 2.3, 1e-12);
  EXPECT_NEAR(next(2), M_PI / 2.0 + 0.05, 1e-12);
  EXPECT_NEAR(next(3), 2.9, 1e-12);
}

TEST(Unicycle, JointStepIsBlockwise) {
  VectorXd x(8);
  x << 0, 0, 0, 1, 5, 5, 1, 2;
  const cg::ControlSet u = {Vector2d(0.1, 0.2), Vector2d(-0.3, 0.0)};
  VectorXd w = VectorXd::LinSpaced(8, 0.0, 0.7);
  const VectorXd joint = cg::joint_step(x, u, w, 0.2);
  for (int a = 0; a < 2; ++a) {
    const Vector4d single = cg::unicycle_step(x.segment<4>(4 * a), u[a], w.segment<4>(4 * a), 0.2);
    EXPECT_TRUE(joint.segment<4>(4 * a).isApprox(single));
  }
  const cg::UnicycleDynamics dyn(2, 0.2);
  EXPECT_EQ(dyn.state_dim(), 8);
  EXPECT_EQ(dyn.total_control_dim(), 4);
  EXPECT_TRUE(dyn.step(x, u, w).isApprox(joint));
  EXPECT_THROW(dyn.step(x, {Vector2d::Zero()}, w), cg::InvalidInputError);
}

TEST(LinearDynamics, StepAndLinearization) {
  const MatrixXd A = (MatrixXd(2, 2) << 1, 0.1, 0, 1).finished();
  const MatrixXd B = (MatrixXd(2, 1) << 0, 0.1).finished();
  const cg::LinearDynamics dyn(A, {B});
  const VectorXd x = Eigen::Vector2d(1.0, 2.0);
  const VectorXd next = dyn.step(x, {VectorXd::Constant(1, 3.0)}, Eigen::Vector2d(0.0, 1.0));
  EXPECT_TRUE(next.isApprox(Eigen::Vector2d(1.2, 3.3)));
  const auto lin = dyn.linearize(x, {VectorXd::Zero(1)});
  EXPECT_EQ(lin.A, A);
  EXPECT_EQ(lin.B[0], B);
}

TEST(Measurement, SpeedScaled) {
  VectorXd x(4);
  x << 1, 2, 0.3, 4;
  const VectorXd v = Eigen::Vector4d(0.1, -0.1, 0.2, 0.5);
  EXPECT_TRUE(cg::speed_scaled_measurement(x, v).isApprox(x + 4.0 * v));
  const cg::SpeedScaledMeasurement model(1);
  const auto lin = model.linearize(x);
  EXPECT_TRUE(lin.H.isIdentity());
  EXPECT_TRUE(lin.V.isApprox(4.0 * MatrixXd::Identity(4, 4)));
  EXPECT_TRUE(cg::additive_measurement(x, v).isApprox(x + v));
}

TEST(DrivingCost, HandComputedValue) {
  cg::PlayerCost pc;
  pc.lane = cg::Polyline({{-10.0, 0.0}, {10.0, 0.0}});
  pc.lane_weight = 2.0;
  pc.nominal_speed = 5.0;
  pc.speed_weight = 3.0;
  pc.control_weights = Vector2d(0.5, 0.25);
  VectorXd x(8);
  x << 0, 0, 0, 0, 1, 2, 0, 3;
  const cg::ControlSet u = {Vector2d(9.0, 9.0), Vector2d(2.0, 4.0)};
  // 2 * 2^2 + 3 * (3 - 5)^2 + 0.5 * 4 + 0.25 * 16
  EXPECT_DOUBLE_EQ(cg::running_cost(1, x, u, pc), 8.0 + 12.0 + 2.0 + 4.0);
  const cg::DrivingCost cost(1, 2, pc);
  EXPECT_DOUBLE_EQ(cost.running(0, x, u), 26.0);
  EXPECT_DOUBLE_EQ(cost.terminal(x), 20.0);
  const auto e = cost.expand_running(0, x, u);
  EXPECT_TRUE(e.R[0].isZero());
  EXPECT_TRUE(e.r[0].isZero());
}

TEST(DrivingCost, ValidateRejectsNegativeWeights) {
  cg::PlayerCost pc;
  pc.lane = cg::Polyline({{0.0, 0.0}, {1.0, 0.0}});
  pc.lane_weight = -1.0;
  EXPECT_THROW(pc.validate(), cg::ValidationError);
}

TEST(QuadraticCost, ExpansionIsExact) {
  const MatrixXd Q = (MatrixXd(2, 2) << 2, 1, 1, 3).finished();
  const VectorXd l = Eigen::Vector2d(1.0, -1.0);
  const cg::QuadraticCost cost(Q, l, {MatrixXd::Identity(1, 1)}, {VectorXd::Constant(1, 0.5)},
                               Q, l);
  const VectorXd x = Eigen::Vector2d(0.5, 2.0);
  const cg::ControlSet u = {VectorXd::Constant(1, 2.0)};
  const auto e = cost.expand_running(0, x, u);
  EXPECT_TRUE(e.Q.isApprox(Q));
  EXPECT_TRUE(e.l.isApprox(Q * x + l));
  EXPECT_NEAR(e.r[0](0), 2.5, 1e-12);
  EXPECT_NEAR(cost.running(0, x, u), 0.5 * x.dot(Q * x) + l.dot(x) + 2.0 + 1.0, 1e-12);
}

TEST(GameSpec, IsCovariance) {
  EXPECT_TRUE(cg::is_covariance(MatrixXd::Identity(3, 3)));
  EXPECT_FALSE(cg::is_covariance((MatrixXd(2, 2) << 1, 2, 2, 1).finished()));
  EXPECT_FALSE(cg::is_covariance((MatrixXd(2, 2) << 1, 0.5, 0, 1).finished()));
}

TEST(GameSpec, ValidateNamesTheField) {
  cg::GameSpec spec;
  spec.dynamics = std::make_shared<cg::UnicycleDynamics>(1, 0.1);
  spec.measurement = std::make_shared<cg::AdditiveMeasurement>(4);
  spec.horizon = 5;
  try {
    spec.validate();
    FAIL() << "expected ValidationError";
  } catch (const cg::ValidationError& e) {
    EXPECT_EQ(e.field(), "costs");
  }
}

}  // namespace
