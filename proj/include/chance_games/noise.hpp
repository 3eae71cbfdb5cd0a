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

#include <cstdint>

namespace chance_games {

// Noise channels of one closed-loop trial.
enum class NoiseChannel : std::uint32_t {
  kInitialState = 0,
  kProcess = 1,
  kMeasurement = 2,
};

// Stateless counter-based standard normal sampler. Every draw is a pure
// function of (seed, timestep, channel, component), so trials can be run in
// any order or in parallel and still reproduce bit for bit.
class CounterNormal {
 public:
  explicit CounterNormal(std::uint64_t seed) : seed_(seed) {}

  double sample(std::uint64_t timestep, NoiseChannel channel, std::uint64_t component) const;
  VectorXd vector(std::uint64_t timestep, NoiseChannel channel, Eigen::Index dim) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// 64-bit finalizer of splitmix64.
std::uint64_t mix64(std::uint64_t x);

// Symmetric square root S with S S^T = covariance; negative eigenvalues are
// treated as zero.
MatrixXd covariance_square_root(const MatrixXd& covariance);

}  // namespace chance_games
