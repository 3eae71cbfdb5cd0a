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
#include "chance_games/ilq_solver.hpp"
#include "chance_games/monte_carlo.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chance_games {

inline constexpr int kTrajectorySchemaVersion = 1;

inline const std::vector<std::string>& agent_state_labels() {
  static const std::vector<std::string> labels = {"x", "y", "heading", "speed"};
  return labels;
}

inline const std::vector<std::string>& agent_control_labels() {
  static const std::vector<std::string> labels = {"yaw_rate", "acceleration"};
  return labels;
}

// Native trajectory artifact. Covariances are optional because the tabular
// form does not carry them.
struct TrajectoryDocument {
  std::string scenario;
  int num_agents = 0;
  std::optional<double> dt;
  std::vector<VectorXd> means;                // k = 0..L
  std::vector<ControlSet> controls;           // k = 0..L-1
  std::vector<MatrixXd> covariances;          // empty or k = 0..L

  int horizon() const { return static_cast<int>(controls.size()); }
};

TrajectoryDocument make_trajectory_document(const std::string& scenario, const GameSpec& spec,
                                            const BeliefTrajectory& trajectory);

// JSON with schema_version, labels, per-timestep means and controls, and
// covariances as lower-triangular packed rows.
std::string trajectory_to_json(const TrajectoryDocument& doc);
TrajectoryDocument trajectory_from_json(std::string_view text);

// One row per timestep per agent:
//   k,agent,x,y,heading,speed,yaw_rate,acceleration
// Control cells are empty on the final timestep.
std::string trajectory_to_csv(const TrajectoryDocument& doc);
TrajectoryDocument trajectory_from_csv(std::string_view text);

std::string diagnostics_to_json(const Solution& solution);
std::string report_to_json(const MonteCarloReport& report);

struct RunManifest {
  std::string command;
  std::string scenario;
  std::vector<std::string> overrides;
  std::string mode;
  std::vector<std::uint64_t> seeds;
  std::string version;
  double wall_time_seconds = 0.0;
  std::vector<std::string> outputs;
};

std::string manifest_to_json(const RunManifest& manifest);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace chance_games
