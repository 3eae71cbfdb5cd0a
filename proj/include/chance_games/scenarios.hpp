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

#include "chance_games/cost.hpp"
#include "chance_games/game_spec.hpp"
#include "chance_games/geometry.hpp"
#include "chance_games/ilq_solver.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace chance_games {

inline constexpr int kScenarioSchemaVersion = 1;

enum class MeasurementKind { kSpeedScaled, kAdditive };

std::string to_string(MeasurementKind kind);

struct AgentConfig {
  std::string name;
  Eigen::Vector4d initial_state = Eigen::Vector4d::Zero();  // x, y, heading, speed
  PlayerCost cost;

  bool operator==(const AgentConfig&) const = default;
};

struct ObstacleConfig {
  std::string name;
  ObstacleShape shape;

  bool operator==(const ObstacleConfig&) const = default;
};

enum class ConstraintKind { kProximity, kObstacle };

struct ConstraintConfig {
  ConstraintKind kind = ConstraintKind::kProximity;
  std::vector<int> agents;  // two agents for proximity, one for obstacle
  std::string obstacle;     // obstacle constraints only
  double min_distance = 3.0;  // proximity constraints only
  double probability = 0.9;
  int first_step = 0;
  int last_step = -1;  // negative: through the horizon

  bool operator==(const ConstraintConfig&) const = default;
};

// Declarative scenario. Covariances are full matrices in memory; the file
// format accepts a scalar (multiple of I), a diagonal or a full matrix.
struct ScenarioConfig {
  std::string name;
  double horizon_seconds = 1.0;
  int steps = 1;
  MeasurementKind measurement = MeasurementKind::kAdditive;
  std::vector<AgentConfig> agents;
  std::vector<ObstacleConfig> obstacles;
  std::vector<ConstraintConfig> constraints;
  MatrixXd process_noise;       // 4N x 4N
  MatrixXd measurement_noise;   // 4N x 4N
  MatrixXd initial_covariance;  // 4N x 4N
  SolverConfig solver;

  double dt() const { return horizon_seconds / steps; }
  int num_agents() const { return static_cast<int>(agents.size()); }
  VectorXd initial_state() const;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

struct LoadedScenario {
  ScenarioConfig config;
  GameSpec spec;
  SolverConfig solver;
};

// Parses a scenario document. Malformed text throws ParseError with the byte
// offset, unknown or mistyped fields throw ValidationError naming the field.
ScenarioConfig parse_scenario(std::string_view text);

// Canonical form: every field written, defaults included, fixed key order.
std::string serialize_scenario(const ScenarioConfig& config);

GameSpec build_game_spec(const ScenarioConfig& config);

LoadedScenario load_scenario(const ScenarioConfig& config);
LoadedScenario load_scenario(std::string_view text);
LoadedScenario load_scenario_file(const std::filesystem::path& path);

const std::vector<std::string>& builtin_scenario_names();

// Throws InvalidInputError listing the valid names.
ScenarioConfig builtin_scenario(const std::string& name);

// Applies "path=value" overrides to the canonical document and re-validates.
// Paths are dotted with numeric array indices (agents.1.nominal_speed); values
// are JSON, or taken as strings when they do not parse.
ScenarioConfig apply_overrides(const ScenarioConfig& config,
                               const std::vector<std::string>& overrides);

// A builtin name, or else a path to a scenario file.
ScenarioConfig resolve_scenario(const std::string& reference);

}  // namespace chance_games
