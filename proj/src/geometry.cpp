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

#include "chance_games/geometry.hpp"

#include "chance_games/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chance_games {

Polyline::Polyline(std::vector<Eigen::Vector2d> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw InvalidInputError("polyline needs at least two points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].allFinite()) throw InvalidInputError("polyline point is not finite");
    if (i > 0 && (points_[i] - points_[i - 1]).norm() == 0.0) {
      throw InvalidInputError("polyline has repeated consecutive points");
    }
  }
}

Polyline::Projection Polyline::project(const Eigen::Vector2d& p) const {
  Projection best;
  best.squared_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Eigen::Vector2d a = points_[i];
    const Eigen::Vector2d ab = points_[i + 1] - a;
    const double t = (p - a).dot(ab) / ab.squaredNorm();
    Eigen::Vector2d closest;
    bool interior = false;
    if (t <= 0.0) {
      closest = a;
    } else if (t >= 1.0) {
      closest = points_[i + 1];
    } else {
      closest = a + t * ab;
      interior = true;
    }
    const Eigen::Vector2d d = p - closest;
    const double d2 = d.squaredNorm();
    if (d2 < best.squared_distance) {
      best.squared_distance = d2;
      best.closest = closest;
      best.gradient = 2.0 * d;
      if (interior) {
        const Eigen::Vector2d tangent = ab.normalized();
        best.hessian = 2.0 * (Eigen::Matrix2d::Identity() - tangent * tangent.transpose());
      } else {
        best.hessian = 2.0 * Eigen::Matrix2d::Identity();
      }
    }
  }
  return best;
}

double Polyline::distance(const Eigen::Vector2d& p) const {
  return std::sqrt(project(p).squared_distance);
}

namespace {

// Twice the signed area; positive for counter-clockwise order.
double signed_area2(const std::vector<Eigen::Vector2d>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return a;
}

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

void validate_shape(const ObstacleShape& shape) {
  if (const auto* disc = std::get_if<Disc>(&shape)) {
    if (!disc->center.allFinite() || !std::isfinite(disc->radius) || disc->radius <= 0.0) {
      throw InvalidInputError("disc obstacle needs a finite center and positive radius");
    }
    return;
  }
  const auto& poly = std::get<ConvexPolygon>(shape);
  const auto& v = poly.vertices;
  if (v.size() < 3) throw InvalidInputError("polygon obstacle needs at least three vertices");
  for (const auto& p : v) {
    if (!p.allFinite()) throw InvalidInputError("polygon vertex is not finite");
  }
  if (signed_area2(v) <= 0.0) {
    throw InvalidInputError("polygon vertices must be counter-clockwise with positive area");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    const auto& c = v[(i + 2) % v.size()];
    if (cross(b - a, c - b) < 0.0) throw InvalidInputError("polygon is not convex");
  }
}

SupportingHalfspace nearest_supporting_halfspace(const ObstacleShape& shape,
                                                 const Eigen::Vector2d& p) {
  SupportingHalfspace h;
  if (const auto* disc = std::get_if<Disc>(&shape)) {
    Eigen::Vector2d to_center = disc->center - p;
    double dist = to_center.norm();
    Eigen::Vector2d n = dist > 0.0 ? Eigen::Vector2d(to_center / dist) : Eigen::Vector2d::UnitX();
    h.normal = n;
    h.offset = n.dot(disc->center) - disc->radius;
    h.signed_distance = dist - disc->radius;
    return h;
  }

  const auto& v = std::get<ConvexPolygon>(shape).vertices;
  // Inside test and nearest edge (by distance to the edge line).
  bool inside = true;
  double best_inside = std::numeric_limits<double>::infinity();
  Eigen::Vector2d inside_normal = Eigen::Vector2d::UnitX();
  double inside_offset = 0.0;
  double best_outside = std::numeric_limits<double>::infinity();
  Eigen::Vector2d nearest = v.front();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Eigen::Vector2d a = v[i];
    const Eigen::Vector2d ab = v[(i + 1) % v.size()] - a;
    const Eigen::Vector2d outward = Eigen::Vector2d(ab.y(), -ab.x()).normalized();
    const double line_dist = outward.dot(p - a);  // > 0 outside this edge
    if (line_dist > 0.0) inside = false;
    if (-line_dist < best_inside) {
      best_inside = -line_dist;
      inside_normal = -outward;
      inside_offset = -outward.dot(a);
    }
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    const Eigen::Vector2d z = a + t * ab;
    const double d = (p - z).norm();
    if (d < best_outside) {
      best_outside = d;
      nearest = z;
    }
  }
  if (inside) {
    h.normal = inside_normal;
    h.offset = inside_offset;
    h.signed_distance = -best_inside;
    return h;
  }
  const Eigen::Vector2d n = (nearest - p) / best_outside;
  h.normal = n;
  h.offset = n.dot(nearest);
  h.signed_distance = best_outside;
  return h;
}

}  // namespace chance_games
