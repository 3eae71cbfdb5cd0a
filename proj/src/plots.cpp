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

#include "chance_games/plots.hpp"

#include "chance_games/io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace chance_games {

namespace {

const char* const kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string color(int i) { return kPalette[i % 6]; }

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << std::fixed << v;
  return ss.str();
}

struct Bounds {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void add(const Eigen::Vector2d& p, double pad = 0.0) {
    xmin = std::min(xmin, p.x() - pad);
    xmax = std::max(xmax, p.x() + pad);
    ymin = std::min(ymin, p.y() - pad);
    ymax = std::max(ymax, p.y() + pad);
  }
};

}  // namespace

std::string trajectory_svg(const ScenarioConfig& scenario, const BeliefTrajectory& trajectory,
                           double sigma) {
  const int N = scenario.num_agents();
  Bounds b;
  for (const auto& x : trajectory.means) {
    for (int i = 0; i < N; ++i) b.add(x.segment<2>(kAgentStateDim * i), 3.0);
  }
  for (const auto& o : scenario.obstacles) {
    if (const auto* d = std::get_if<Disc>(&o.shape)) {
      b.add(d->center, d->radius);
    } else {
      for (const auto& v : std::get<ConvexPolygon>(o.shape).vertices) b.add(v);
    }
  }
  if (!std::isfinite(b.xmin)) b = Bounds{-1, 1, -1, 1};

  const double width = 800.0;
  const double scale = width / std::max(b.xmax - b.xmin, 1e-6);
  const double height = std::max(200.0, (b.ymax - b.ymin) * scale);
  auto px = [&](const Eigen::Vector2d& p) {
    return std::pair{(p.x() - b.xmin) * scale, height - (p.y() - b.ymin) * scale};
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<!-- " << scenario.name << " -->\n";

  // Clip lanes to the view so long references do not dominate.
  svg << "<defs><clipPath id=\"view\"><rect width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\"/></clipPath></defs>\n<g clip-path=\"url(#view)\">\n";
  for (int i = 0; i < N; ++i) {
    svg << "<polyline fill=\"none\" stroke=\"#bbbbbb\" stroke-dasharray=\"6 4\" points=\"";
    for (const auto& p : scenario.agents[i].cost.lane.points()) {
      const auto [x, y] = px(p);
      svg << fmt(x) << "," << fmt(y) << " ";
    }
    svg << "\"/>\n";
  }
  for (const auto& o : scenario.obstacles) {
    if (const auto* d = std::get_if<Disc>(&o.shape)) {
      const auto [x, y] = px(d->center);
      svg << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(d->radius * scale)
          << "\" fill=\"#555555\"/>\n";
    } else {
      svg << "<polygon fill=\"#555555\" points=\"";
      for (const auto& v : std::get<ConvexPolygon>(o.shape).vertices) {
        const auto [x, y] = px(v);
        svg << fmt(x) << "," << fmt(y) << " ";
      }
      svg << "\"/>\n";
    }
  }
  for (int i = 0; i < N; ++i) {
    const int base = kAgentStateDim * i;
    for (std::size_t k = 0; k < trajectory.covariances.size(); ++k) {
      const Eigen::Matrix2d P = symmetrized(trajectory.covariances[k].block(base, base, 2, 2));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(P);
      const Eigen::Vector2d axes = es.eigenvalues().cwiseMax(0.0).cwiseSqrt() * sigma;
      const Eigen::Vector2d major = es.eigenvectors().col(1);
      const double angle = -std::atan2(major.y(), major.x()) * 180.0 / std::numbers::pi;
      const auto [x, y] = px(trajectory.means[k].segment<2>(base));
      svg << "<ellipse cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" rx=\""
          << fmt(axes(1) * scale) << "\" ry=\"" << fmt(axes(0) * scale) << "\" transform=\"rotate("
          << fmt(angle) << " " << fmt(x) << " " << fmt(y) << ")\" fill=\"" << color(i)
          << "\" fill-opacity=\"0.12\" stroke=\"" << color(i) << "\" stroke-opacity=\"0.4\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color(i) << "\" stroke-width=\"2\" points=\"";
    for (const auto& x : trajectory.means) {
      const auto [sx, sy] = px(x.segment<2>(base));
      svg << fmt(sx) << "," << fmt(sy) << " ";
    }
    svg << "\"/>\n";
    const auto [sx, sy] = px(trajectory.means.front().segment<2>(base));
    svg << "<circle cx=\"" << fmt(sx) << "\" cy=\"" << fmt(sy) << "\" r=\"4\" fill=\"" << color(i)
        << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::string violation_histogram_svg(const MonteCarloReport& report, const std::string& title) {
  const auto& h = report.violation_histogram;
  const double width = 640.0;
  const double height = 360.0;
  const double left = 50.0;
  const double right = 20.0;
  const double top = 40.0;
  const double bottom = 40.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fmt(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"14\">" << title << " (rate " << format_double(report.satisfaction_rate)
      << ")</text>\n";
  if (h.counts.empty()) return svg.str() + "</svg>\n";

  const int peak = std::max(1, *std::max_element(h.counts.begin(), h.counts.end()));
  const double lo = h.edges.front();
  const double hi = h.edges.back();
  auto sx = [&](double v) { return left + (v - lo) / (hi - lo) * plot_w; };
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double x0 = sx(h.edges[i]);
    const double x1 = sx(h.edges[i + 1]);
    const double bar = plot_h * h.counts[i] / peak;
    const bool safe = h.edges[i + 1] <= 0.0;
    svg << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(top + plot_h - bar) << "\" width=\""
        << fmt(std::max(0.0, x1 - x0 - 1.0)) << "\" height=\"" << fmt(bar) << "\" fill=\""
        << (safe ? "#1f77b4" : "#d62728") << "\"/>\n";
  }
  svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + plot_h) << "\" x2=\""
      << fmt(left + plot_w) << "\" y2=\"" << fmt(top + plot_h) << "\" stroke=\"black\"/>\n";
  if (lo <= 0.0 && hi >= 0.0) {
    svg << "<line x1=\"" << fmt(sx(0.0)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(sx(0.0))
        << "\" y2=\"" << fmt(top + plot_h) << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  }
  svg << "<text x=\"" << fmt(left) << "\" y=\"" << fmt(height - 12) << "\" font-family=\"sans-serif\""
      << " font-size=\"11\">" << fmt(lo) << "</text>\n";
  svg << "<text x=\"" << fmt(left + plot_w) << "\" y=\"" << fmt(height - 12)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(hi)
      << "</text>\n";
  svg << "<text x=\"" << fmt(width / 2) << "\" y=\"" << fmt(height - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << "max constraint violation [m]</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace chance_games
