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

#include "chance_games/constraints.hpp"

#include "chance_games/belief.hpp"
#include "chance_games/dynamics.hpp"
#include "chance_games/game_spec.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace chance_games {

namespace {

Eigen::Vector2d position(const VectorXd& x, int agent) {
  const Eigen::Index o = kAgentStateDim * agent;
  if (agent < 0 || o + kAgentStateDim > x.size()) {
    throw InvalidInputError("constraint agent index out of range");
  }
  return x.segment<2>(o);
}

}  // namespace

double proximity_value(const VectorXd& state, int agent_a, int agent_b, double min_distance) {
  return min_distance - (position(state, agent_a) - position(state, agent_b)).norm();
}

double obstacle_value(const VectorXd& state, int agent, const ObstacleShape& obstacle) {
  validate_shape(obstacle);
  const Eigen::Vector2d p = position(state, agent);
  const auto h = nearest_supporting_halfspace(obstacle, p);
  return h.normal.dot(p) - h.offset;
}

ProximityConstraint::ProximityConstraint(int agent_a, int agent_b, double min_distance)
    : a_(agent_a), b_(agent_b), d_min_(min_distance) {
  if (agent_a == agent_b) throw InvalidInputError("proximity pair indices must differ");
  if (agent_a < 0 || agent_b < 0) throw InvalidInputError("proximity agent index negative");
  if (!(min_distance > 0.0) || !std::isfinite(min_distance)) {
    throw InvalidInputError("proximity min_distance must be positive");
  }
}

double ProximityConstraint::value(const VectorXd& x) const {
  return proximity_value(x, a_, b_, d_min_);
}

VectorXd ProximityConstraint::gradient(const VectorXd& x) const {
  Eigen::Vector2d d = position(x, a_) - position(x, b_);
  double norm = d.norm();
  if (norm < 1e-12) {
    d += Eigen::Vector2d(1e-6, 0.0);
    norm = d.norm();
  }
  const Eigen::Vector2d unit = d / norm;
  VectorXd grad = VectorXd::Zero(x.size());
  grad.segment<2>(kAgentStateDim * a_) = -unit;
  grad.segment<2>(kAgentStateDim * b_) = unit;
  return grad;
}

std::string ProximityConstraint::describe() const {
  std::ostringstream os;
  os << "proximity(" << a_ << "," << b_ << ",d_min=" << d_min_ << ")";
  return os.str();
}

ObstacleConstraint::ObstacleConstraint(int agent, ObstacleShape obstacle, std::string name)
    : agent_(agent), obstacle_(std::move(obstacle)), name_(std::move(name)) {
  if (agent < 0) throw InvalidInputError("obstacle agent index negative");
  validate_shape(obstacle_);
}

double ObstacleConstraint::value(const VectorXd& x) const {
  const Eigen::Vector2d p = position(x, agent_);
  const auto h = nearest_supporting_halfspace(obstacle_, p);
  return h.normal.dot(p) - h.offset;
}

VectorXd ObstacleConstraint::gradient(const VectorXd& x) const {
  const Eigen::Vector2d p = position(x, agent_);
  const auto h = nearest_supporting_halfspace(obstacle_, p);
  VectorXd grad = VectorXd::Zero(x.size());
  grad.segment<2>(kAgentStateDim * agent_) = h.normal;
  return grad;
}

std::string ObstacleConstraint::describe() const {
  return "obstacle(" + std::to_string(agent_) + "," + (name_.empty() ? "unnamed" : name_) + ")";
}

AffineConstraint::AffineConstraint(RowVectorXd G, double q) : G_(std::move(G)), q_(q) {}

double AffineConstraint::value(const VectorXd& x) const {
  require_size(x.size(), G_.size(), "state");
  return G_.dot(x.transpose()) + q_;
}

VectorXd AffineConstraint::gradient(const VectorXd& x) const {
  require_size(x.size(), G_.size(), "state");
  return G_.transpose();
}

std::string AffineConstraint::describe() const { return "affine"; }

std::pair<RowVectorXd, double> linearize_constraint(const StateConstraint& g,
                                                    const VectorXd& nominal) {
  require_finite(nominal, "constraint nominal");
  RowVectorXd G = g.gradient(nominal).transpose();
  if (G.norm() < 1e-9) {
    throw DegenerateGradientError("constraint " + g.describe() + " has a vanishing gradient");
  }
  const double q = g.value(nominal) - G.dot(nominal.transpose());
  return {std::move(G), q};
}

double inverse_erf(double y) {
  if (!(std::abs(y) < 1.0)) throw DomainError("inverse_erf: argument must lie in (-1, 1)");
  if (y == 0.0) return 0.0;
  // Rational initial guess (single-precision accurate), then two Halley steps.
  double w = -std::log((1.0 - y) * (1.0 + y));
  double p;
  if (w < 5.0) {
    w -= 2.5;
    p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
  } else {
    w = std::sqrt(w) - 3.0;
    p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
  }
  double x = p * y;
  const double two_over_sqrt_pi = 2.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < 2; ++i) {
    const double f = std::erf(x) - y;
    const double df = two_over_sqrt_pi * std::exp(-x * x);
    x -= f / (df + x * f);
  }
  return x;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  return std::numbers::sqrt2 * inverse_erf(2.0 * p - 1.0);
}

namespace {

double projected_variance(const RowVectorXd& G, const MatrixXd& covariance) {
  require_size(covariance.rows(), G.size(), "covariance");
  require_size(covariance.cols(), G.size(), "covariance");
  double var = G.dot((covariance * G.transpose()).transpose());
  if (var < -1e-12) {
    throw NumericalError("constraint variance G Sigma G^T is negative: " + std::to_string(var));
  }
  return std::max(var, 0.0);
}

}  // namespace

double safety_margin_rho(const RowVectorXd& G, const MatrixXd& covariance, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("safety_margin_rho: p must lie in (0, 1)");
  const double var = projected_variance(G, covariance);
  if (var == 0.0) return 0.0;
  return std::sqrt(2.0 * var) * inverse_erf(2.0 * p - 1.0);
}

double surrogate_value(const LinearizedConstraint& lc, const VectorXd& mean) {
  require_size(mean.size(), lc.G.size(), "mean");
  return lc.G.dot(mean.transpose()) + lc.q + lc.rho;
}

double chance_violation_probability(const LinearizedConstraint& lc, const VectorXd& mean,
                                    const MatrixXd& covariance, double p) {
  require_size(mean.size(), lc.G.size(), "mean");
  const double sigma = std::sqrt(projected_variance(lc.G, covariance));
  const double g_mean = lc.G.dot(mean.transpose()) + lc.q;
  if (sigma == 0.0) return g_mean <= 0.0 ? p - 1.0 : p;
  return p - normal_cdf(-g_mean / sigma);
}

std::vector<LinearizedConstraint> linearize_chance_constraints(const GameSpec& spec,
                                                               const BeliefTrajectory& nominal) {
  const int horizon = spec.horizon;
  require_size(static_cast<Eigen::Index>(nominal.means.size()), horizon + 1, "nominal means");
  require_size(static_cast<Eigen::Index>(nominal.covariances.size()), horizon + 1,
               "nominal covariances");
  std::vector<LinearizedConstraint> out;
  for (int k = 0; k <= horizon; ++k) {
    for (std::size_t m = 0; m < spec.constraints.size(); ++m) {
      const auto& cc = spec.constraints[m];
      if (!cc.active_at(k, horizon)) continue;
      const VectorXd& x = nominal.means[k];
      std::pair<RowVectorXd, double> gq;
      try {
        gq = linearize_constraint(*cc.constraint, x);
      } catch (const DegenerateGradientError&) {
        VectorXd shift(x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
          shift(j) = 1e-6 * static_cast<double>(j + 1) / static_cast<double>(x.size());
        }
        gq = linearize_constraint(*cc.constraint, x + shift);
        // Keep the reconstruction identity at the true nominal.
        gq.second = cc.constraint->value(x) - gq.first.dot(x.transpose());
      }
      LinearizedConstraint lc;
      lc.G = std::move(gq.first);
      lc.q = gq.second;
      lc.rho = safety_margin_rho(lc.G, nominal.covariances[k], cc.probability);
      lc.timestep = k;
      lc.index = static_cast<int>(m);
      out.push_back(std::move(lc));
    }
  }
  return out;
}

}  // namespace chance_games
