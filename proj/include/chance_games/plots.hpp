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

#include "chance_games/belief.hpp"
#include "chance_games/monte_carlo.hpp"
#include "chance_games/scenarios.hpp"

#include <string>

namespace chance_games {

// Top-down SVG of lanes, obstacles, nominal agent paths and position
// covariance ellipses at `sigma` standard deviations.
std::string trajectory_svg(const ScenarioConfig& scenario, const BeliefTrajectory& trajectory,
                           double sigma = 2.0);

// Bar chart of the maximum-violation histogram with the g = 0 line marked.
std::string violation_histogram_svg(const MonteCarloReport& report, const std::string& title);

}  // namespace chance_games
