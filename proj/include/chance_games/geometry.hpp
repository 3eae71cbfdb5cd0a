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

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace chance_games {

// Piecewise-linear lane center. At least two points, consecutive points distinct.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Eigen::Vector2d> points);

  // Squared Euclidean distance from `p` to the nearest point on the polyline,
  // with its gradient and Hessian in `p`. The Hessian is 2(I - t t^T) when the
  // nearest point is interior to a segment with unit tangent t, and 2I when it
  // is a vertex.
  struct Projection {
    double squared_distance = 0.0;
    Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
    Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
    Eigen::Vector2d closest = Eigen::Vector2d::Zero();
  };
  Projection project(const Eigen::Vector2d& p) const;

  double distance(const Eigen::Vector2d& p) const;
  const std::vector<Eigen::Vector2d>& points() const { return points_; }
  bool operator==(const Polyline& other) const { return points_ == other.points_; }

 private:
  std::vector<Eigen::Vector2d> points_;
};

// Closed disc.
struct Disc {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
  bool operator==(const Disc&) const = default;
};

// Convex polygon with counter-clockwise vertices.
struct ConvexPolygon {
  std::vector<Eigen::Vector2d> vertices;
  bool operator==(const ConvexPolygon&) const = default;
};

using ObstacleShape = std::variant<Disc, ConvexPolygon>;

// Halfspace supporting the obstacle at the boundary point nearest a query
// point. `normal` points from the query point into the obstacle, so
// normal^T p - offset equals the negated signed distance at the query point.
struct SupportingHalfspace {
  Eigen::Vector2d normal = Eigen::Vector2d::UnitX();
  double offset = 0.0;
  double signed_distance = 0.0;  // positive outside the obstacle
};

// Throws InvalidInputError for an empty or non-convex polygon, or a non-positive radius.
void validate_shape(const ObstacleShape& shape);

// Halfspace of the obstacle region nearest `p`. Outside the obstacle the
// normal points from `p` toward the nearest boundary point; inside a polygon it
// is the inward normal of the nearest edge. A point at a disc center uses +x.
SupportingHalfspace nearest_supporting_halfspace(const ObstacleShape& shape,
                                                 const Eigen::Vector2d& p);

}  // namespace chance_games
