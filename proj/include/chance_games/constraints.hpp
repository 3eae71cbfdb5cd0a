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
#include "chance_games/geometry.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace chance_games {

struct GameSpec;
struct BeliefTrajectory;

// Scalar state constraint g(x) <= 0.
class StateConstraint {
 public:
  virtual ~StateConstraint() = default;
  virtual double value(const VectorXd& x) const = 0;
  // May return a zero vector where g is not differentiable.
  virtual VectorXd gradient(const VectorXd& x) const = 0;
  virtual std::string describe() const = 0;
};

// g = d_min - ||p_i - p_j||.
double proximity_value(const VectorXd& state, int agent_a, int agent_b, double min_distance);

// g = normal^T p - offset for the obstacle halfspace nearest the agent, which
// is the negated signed distance to the obstacle.
double obstacle_value(const VectorXd& state, int agent, const ObstacleShape& obstacle);

class ProximityConstraint final : public StateConstraint {
 public:
  ProximityConstraint(int agent_a, int agent_b, double min_distance);
  double value(const VectorXd& x) const override;
  // Coincident agents: the difference vector is nudged by 1e-6 along +x.
  VectorXd gradient(const VectorXd& x) const override;
  std::string describe() const override;

  int agent_a() const { return a_; }
  int agent_b() const { return b_; }
  double min_distance() const { return d_min_; }

 private:
  int a_;
  int b_;
  double d_min_;
};

class ObstacleConstraint final : public StateConstraint {
 public:
  ObstacleConstraint(int agent, ObstacleShape obstacle, std::string obstacle_name = {});
  double value(const VectorXd& x) const override;
  VectorXd gradient(const VectorXd& x) const override;
  std::string describe() const override;

  int agent() const { return agent_; }
  const ObstacleShape& obstacle() const { return obstacle_; }

 private:
  int agent_;
  ObstacleShape obstacle_;
  std::string name_;
};

// g = G x + q.
class AffineConstraint final : public StateConstraint {
 public:
  AffineConstraint(RowVectorXd G, double q);
  double value(const VectorXd& x) const override;
  VectorXd gradient(const VectorXd& x) const override;
  std::string describe() const override;

 private:
  RowVectorXd G_;
  double q_;
};

// Pr(g(x_k) <= 0) >= probability for k in [first_step, last_step].
struct ChanceConstraint {
  std::shared_ptr<const StateConstraint> constraint;
  double probability = 0.9;
  int first_step = 0;
  int last_step = -1;  // negative: through the horizon

  bool active_at(int k, int horizon) const {
    const int last = last_step < 0 ? horizon : std::min(last_step, horizon);
    return k >= first_step && k <= last;
  }
};

// Surrogate G x + q + rho <= 0 for one chance constraint at one timestep.
struct LinearizedConstraint {
  RowVectorXd G;
  double q = 0.0;
  double rho = 0.0;
  int timestep = 0;
  int index = 0;  // position in GameSpec::constraints
};

// (G, q) with G = dg/dx at the nominal and q = g(nominal) - G nominal.
// Throws DegenerateGradientError when ||G|| < 1e-9.
std::pair<RowVectorXd, double> linearize_constraint(const StateConstraint& g,
                                                    const VectorXd& nominal);

// Inverse of erf on (-1, 1). Throws DomainError outside.
double inverse_erf(double y);

double normal_cdf(double z);

// Standard normal quantile, sqrt(2) erf^-1(2p - 1).
double normal_quantile(double p);

// rho = sqrt(2 G Sigma G^T) erf^-1(2p - 1).
double safety_margin_rho(const RowVectorXd& G, const MatrixXd& covariance, double p);

// G mean + q + rho; <= 0 when the tightened mean constraint holds.
double surrogate_value(const LinearizedConstraint& lc, const VectorXd& mean);

// p - Pr(G x + q <= 0) for x ~ N(mean, covariance). The margin of `lc` is ignored.
double chance_violation_probability(const LinearizedConstraint& lc, const VectorXd& mean,
                                    const MatrixXd& covariance, double p);

// Linearizes every active (timestep, constraint) pair along a belief trajectory,
// with margins from the trajectory's covariance schedule. Ordered by timestep,
// then constraint index. Degenerate gradients are handled by re-linearizing at
// a nominal shifted by a fixed 1e-6-scale offset.
std::vector<LinearizedConstraint> linearize_chance_constraints(const GameSpec& spec,
                                                               const BeliefTrajectory& nominal);

}  // namespace chance_games
