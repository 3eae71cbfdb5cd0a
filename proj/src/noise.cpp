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

#include "chance_games/noise.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace chance_games {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

// Uniform on (0, 1) from the top 53 bits.
double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double CounterNormal::sample(std::uint64_t timestep, NoiseChannel channel,
                             std::uint64_t component) const {
  std::uint64_t key = mix64(seed_);
  key = mix64(key ^ timestep);
  key = mix64(key ^ static_cast<std::uint64_t>(channel));
  key = mix64(key ^ component);
  const double u1 = to_open_unit(key);
  const double u2 = to_open_unit(mix64(key ^ 0xd1b54a32d192ed03ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

VectorXd CounterNormal::vector(std::uint64_t timestep, NoiseChannel channel,
                               Eigen::Index dim) const {
  VectorXd z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    z(i) = sample(timestep, channel, static_cast<std::uint64_t>(i));
  }
  return z;
}

MatrixXd covariance_square_root(const MatrixXd& covariance) {
  if (covariance.size() == 0) return covariance;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(covariance));
  const VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace chance_games
