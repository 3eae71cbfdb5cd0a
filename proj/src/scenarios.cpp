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

#include "chance_games/scenarios.hpp"

#include "json_util.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

namespace chance_games {

using detail::Json;

std::string to_string(MeasurementKind kind) {
  return kind == MeasurementKind::kSpeedScaled ? "speed_scaled" : "additive";
}

VectorXd ScenarioConfig::initial_state() const {
  VectorXd x(kAgentStateDim * num_agents());
  for (int i = 0; i < num_agents(); ++i) x.segment<4>(kAgentStateDim * i) = agents[i].initial_state;
  return x;
}

namespace {

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void check_covariance(const MatrixXd& m, Eigen::Index dim, const std::string& field) {
  if (m.rows() != dim || m.cols() != dim) {
    throw ValidationError(field, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                                     " matrix");
  }
  if (!m.allFinite()) throw ValidationError(field, "non-finite entry");
  if (!is_covariance(m)) throw ValidationError(field, "not symmetric positive semidefinite");
}

const ObstacleConfig* find_obstacle(const ScenarioConfig& cfg, const std::string& name) {
  for (const auto& o : cfg.obstacles) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (name.empty()) throw ValidationError("name", "must not be empty");
  if (!(horizon_seconds > 0.0) || !std::isfinite(horizon_seconds)) {
    throw ValidationError("horizon_seconds", "must be positive");
  }
  if (steps < 1) throw ValidationError("steps", "must be >= 1");
  if (agents.empty()) throw ValidationError("agents", "at least one agent is required");
  const int N = num_agents();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string field = indexed("agents", i);
    if (!agents[i].initial_state.allFinite()) {
      throw ValidationError(field + ".initial_state", "non-finite entry");
    }
    try {
      agents[i].cost.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(field + "." + e.field(), "invalid value");
    } catch (const InvalidInputError& e) {
      throw ValidationError(field, e.what());
    }
  }
  for (std::size_t o = 0; o < obstacles.size(); ++o) {
    const std::string field = indexed("obstacles", o);
    if (obstacles[o].name.empty()) throw ValidationError(field + ".name", "must not be empty");
    for (std::size_t p = 0; p < o; ++p) {
      if (obstacles[p].name == obstacles[o].name) {
        throw ValidationError(field + ".name", "duplicate obstacle name");
      }
    }
    try {
      validate_shape(obstacles[o].shape);
    } catch (const InvalidInputError& e) {
      throw ValidationError(field, e.what());
    }
  }
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const auto& cc = constraints[c];
    const std::string field = indexed("constraints", c);
    if (!(cc.probability > 0.5 && cc.probability < 1.0)) {
      throw ValidationError(field + ".probability", "must lie in (0.5, 1)");
    }
    for (int a : cc.agents) {
      if (a < 0 || a >= N) throw ValidationError(field + ".agents", "agent index out of range");
    }
    if (cc.first_step < 0) throw ValidationError(field + ".first_step", "must be >= 0");
    if (cc.last_step >= 0 && cc.last_step < cc.first_step) {
      throw ValidationError(field + ".last_step", "must be >= first_step");
    }
    if (cc.kind == ConstraintKind::kProximity) {
      if (cc.agents.size() != 2 || cc.agents[0] == cc.agents[1]) {
        throw ValidationError(field + ".agents", "proximity needs two distinct agents");
      }
      if (!(cc.min_distance > 0.0)) throw ValidationError(field + ".min_distance", "must be > 0");
    } else {
      if (cc.agents.size() != 1) throw ValidationError(field + ".agents", "obstacle needs one agent");
      if (find_obstacle(*this, cc.obstacle) == nullptr) {
        throw ValidationError(field + ".obstacle", "unknown obstacle '" + cc.obstacle + "'");
      }
    }
  }
  const Eigen::Index n = kAgentStateDim * N;
  check_covariance(process_noise, n, "noise.process");
  check_covariance(measurement_noise, n, "noise.measurement");
  check_covariance(initial_covariance, n, "noise.initial");
  try {
    solver.validate();
  } catch (const ValidationError& e) {
    throw ValidationError("solver." + e.field(), "invalid value");
  }
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  auto same = [](const MatrixXd& x, const MatrixXd& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return a.name == b.name && a.horizon_seconds == b.horizon_seconds && a.steps == b.steps &&
         a.measurement == b.measurement && a.agents == b.agents && a.obstacles == b.obstacles &&
         a.constraints == b.constraints && same(a.process_noise, b.process_noise) &&
         same(a.measurement_noise, b.measurement_noise) &&
         same(a.initial_covariance, b.initial_covariance) && a.solver == b.solver;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::vector<Eigen::Vector2d> parse_points(const Json& value, const std::string& path) {
  if (!value.is_array()) throw ValidationError(path, "expected an array of [x, y] points");
  std::vector<Eigen::Vector2d> points;
  for (std::size_t i = 0; i < value.size(); ++i) {
    points.emplace_back(detail::as_vector(value[i], indexed(path, i), 2));
  }
  return points;
}

Json points_to_json(const std::vector<Eigen::Vector2d>& points) {
  Json out = Json::array();
  for (const auto& p : points) out.push_back(Json::array({p.x(), p.y()}));
  return out;
}

AgentConfig parse_agent(const Json& j, const std::string& path) {
  detail::reject_unknown_fields(j, path,
                                {"name", "initial_state", "lane", "lane_weight", "nominal_speed",
                                 "speed_weight", "control_weights"});
  AgentConfig a;
  if (const Json* v = detail::optional_field(j, "name")) a.name = detail::as_string(*v, path + ".name");
  a.initial_state = detail::as_vector(detail::require_field(j, path, "initial_state"),
                                      path + ".initial_state", 4);
  const auto lane = parse_points(detail::require_field(j, path, "lane"), path + ".lane");
  try {
    a.cost.lane = Polyline(lane);
  } catch (const InvalidInputError& e) {
    throw ValidationError(path + ".lane", e.what());
  }
  if (const Json* v = detail::optional_field(j, "lane_weight")) {
    a.cost.lane_weight = detail::as_number(*v, path + ".lane_weight");
  }
  if (const Json* v = detail::optional_field(j, "nominal_speed")) {
    a.cost.nominal_speed = detail::as_number(*v, path + ".nominal_speed");
  }
  if (const Json* v = detail::optional_field(j, "speed_weight")) {
    a.cost.speed_weight = detail::as_number(*v, path + ".speed_weight");
  }
  if (const Json* v = detail::optional_field(j, "control_weights")) {
    a.cost.control_weights = detail::as_vector(*v, path + ".control_weights", 2);
  }
  return a;
}

ObstacleConfig parse_obstacle(const Json& j, const std::string& path) {
  detail::reject_unknown_fields(j, path, {"name", "type", "center", "radius", "vertices"});
  ObstacleConfig o;
  o.name = detail::as_string(detail::require_field(j, path, "name"), path + ".name");
  const std::string type = detail::as_string(detail::require_field(j, path, "type"), path + ".type");
  if (type == "disc") {
    if (detail::optional_field(j, "vertices")) {
      throw ValidationError(path + ".vertices", "not allowed for a disc");
    }
    Disc d;
    d.center = detail::as_vector(detail::require_field(j, path, "center"), path + ".center", 2);
    d.radius = detail::as_number(detail::require_field(j, path, "radius"), path + ".radius");
    o.shape = d;
  } else if (type == "polygon") {
    if (detail::optional_field(j, "center") || detail::optional_field(j, "radius")) {
      throw ValidationError(path, "center/radius not allowed for a polygon");
    }
    o.shape = ConvexPolygon{
        parse_points(detail::require_field(j, path, "vertices"), path + ".vertices")};
  } else {
    throw ValidationError(path + ".type", "expected 'disc' or 'polygon'");
  }
  return o;
}

std::vector<int> parse_agent_list(const Json& value, const std::string& path) {
  if (!value.is_array()) throw ValidationError(path, "expected an array of agent indices");
  std::vector<int> out;
  for (std::size_t i = 0; i < value.size(); ++i) out.push_back(detail::as_int(value[i], indexed(path, i)));
  return out;
}

ConstraintConfig parse_constraint(const Json& j, const std::string& path) {
  detail::reject_unknown_fields(j, path,
                                {"type", "agents", "obstacle", "min_distance", "probability",
                                 "first_step", "last_step"});
  ConstraintConfig c;
  const std::string type = detail::as_string(detail::require_field(j, path, "type"), path + ".type");
  if (type == "proximity") {
    c.kind = ConstraintKind::kProximity;
    if (detail::optional_field(j, "obstacle")) {
      throw ValidationError(path + ".obstacle", "not allowed for a proximity constraint");
    }
    if (const Json* v = detail::optional_field(j, "min_distance")) {
      c.min_distance = detail::as_number(*v, path + ".min_distance");
    }
  } else if (type == "obstacle") {
    c.kind = ConstraintKind::kObstacle;
    if (detail::optional_field(j, "min_distance")) {
      throw ValidationError(path + ".min_distance", "not allowed for an obstacle constraint");
    }
    c.obstacle = detail::as_string(detail::require_field(j, path, "obstacle"), path + ".obstacle");
  } else {
    throw ValidationError(path + ".type", "expected 'proximity' or 'obstacle'");
  }
  c.agents = parse_agent_list(detail::require_field(j, path, "agents"), path + ".agents");
  if (const Json* v = detail::optional_field(j, "probability")) {
    c.probability = detail::as_number(*v, path + ".probability");
  }
  if (const Json* v = detail::optional_field(j, "first_step")) {
    c.first_step = detail::as_int(*v, path + ".first_step");
  }
  if (const Json* v = detail::optional_field(j, "last_step")) {
    c.last_step = detail::as_int(*v, path + ".last_step");
  }
  return c;
}

SolverConfig parse_solver(const Json& j, const std::string& path) {
  detail::reject_unknown_fields(
      j, path,
      {"mode", "fixed_penalty_weight", "inner_tolerance", "inner_max_iterations",
       "outer_tolerance", "outer_max_iterations", "line_search_factor", "line_search_max_trials",
       "initial_penalty", "penalty_growth", "penalty_cap"});
  SolverConfig s;
  auto number = [&](const char* key, double& out) {
    if (const Json* v = detail::optional_field(j, key)) out = detail::as_number(*v, path + "." + key);
  };
  auto integer = [&](const char* key, int& out) {
    if (const Json* v = detail::optional_field(j, key)) out = detail::as_int(*v, path + "." + key);
  };
  if (const Json* v = detail::optional_field(j, "mode")) {
    try {
      s.mode = penalty_mode_from_string(detail::as_string(*v, path + ".mode"));
    } catch (const ValidationError&) {
      throw;
    } catch (const InvalidInputError& e) {
      throw ValidationError(path + ".mode", e.what());
    }
  }
  number("fixed_penalty_weight", s.fixed_penalty_weight);
  number("inner_tolerance", s.inner_tolerance);
  integer("inner_max_iterations", s.inner_max_iterations);
  number("outer_tolerance", s.outer_tolerance);
  integer("outer_max_iterations", s.outer_max_iterations);
  number("line_search_factor", s.line_search_factor);
  integer("line_search_max_trials", s.line_search_max_trials);
  number("initial_penalty", s.initial_penalty);
  number("penalty_growth", s.penalty_growth);
  number("penalty_cap", s.penalty_cap);
  return s;
}

Json solver_to_json(const SolverConfig& s) {
  Json j = Json::object();
  j["mode"] = to_string(s.mode);
  j["fixed_penalty_weight"] = s.fixed_penalty_weight;
  j["inner_tolerance"] = s.inner_tolerance;
  j["inner_max_iterations"] = s.inner_max_iterations;
  j["outer_tolerance"] = s.outer_tolerance;
  j["outer_max_iterations"] = s.outer_max_iterations;
  j["line_search_factor"] = s.line_search_factor;
  j["line_search_max_trials"] = s.line_search_max_trials;
  j["initial_penalty"] = s.initial_penalty;
  j["penalty_growth"] = s.penalty_growth;
  j["penalty_cap"] = s.penalty_cap;
  return j;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  const Json root = detail::parse_json(text);
  detail::reject_unknown_fields(root, "",
                                {"schema_version", "name", "horizon_seconds", "steps",
                                 "measurement", "agents", "obstacles", "constraints", "noise",
                                 "solver"});
  const int version = detail::as_int(detail::require_field(root, "", "schema_version"),
                                     "schema_version");
  if (version != kScenarioSchemaVersion) {
    throw ValidationError("schema_version", "unsupported version " + std::to_string(version));
  }
  ScenarioConfig cfg;
  cfg.name = detail::as_string(detail::require_field(root, "", "name"), "name");
  cfg.horizon_seconds =
      detail::as_number(detail::require_field(root, "", "horizon_seconds"), "horizon_seconds");
  cfg.steps = detail::as_int(detail::require_field(root, "", "steps"), "steps");
  if (const Json* v = detail::optional_field(root, "measurement")) {
    const std::string kind = detail::as_string(*v, "measurement");
    if (kind == "speed_scaled") {
      cfg.measurement = MeasurementKind::kSpeedScaled;
    } else if (kind == "additive") {
      cfg.measurement = MeasurementKind::kAdditive;
    } else {
      throw ValidationError("measurement", "expected 'speed_scaled' or 'additive'");
    }
  }
  const Json& agents = detail::require_field(root, "", "agents");
  if (!agents.is_array()) throw ValidationError("agents", "expected an array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    cfg.agents.push_back(parse_agent(agents[i], indexed("agents", i)));
  }
  if (const Json* v = detail::optional_field(root, "obstacles")) {
    if (!v->is_array()) throw ValidationError("obstacles", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      cfg.obstacles.push_back(parse_obstacle((*v)[i], indexed("obstacles", i)));
    }
  }
  if (const Json* v = detail::optional_field(root, "constraints")) {
    if (!v->is_array()) throw ValidationError("constraints", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      cfg.constraints.push_back(parse_constraint((*v)[i], indexed("constraints", i)));
    }
  }
  const Eigen::Index n = kAgentStateDim * cfg.num_agents();
  cfg.process_noise = 0.05 * MatrixXd::Identity(n, n);
  cfg.measurement_noise = 0.05 * MatrixXd::Identity(n, n);
  cfg.initial_covariance = 0.01 * MatrixXd::Identity(n, n);
  if (const Json* v = detail::optional_field(root, "noise")) {
    detail::reject_unknown_fields(*v, "noise", {"process", "measurement", "initial"});
    if (const Json* c = detail::optional_field(*v, "process")) {
      cfg.process_noise = detail::parse_covariance(*c, "noise.process", n);
    }
    if (const Json* c = detail::optional_field(*v, "measurement")) {
      cfg.measurement_noise = detail::parse_covariance(*c, "noise.measurement", n);
    }
    if (const Json* c = detail::optional_field(*v, "initial")) {
      cfg.initial_covariance = detail::parse_covariance(*c, "noise.initial", n);
    }
  }
  if (const Json* v = detail::optional_field(root, "solver")) cfg.solver = parse_solver(*v, "solver");
  cfg.validate();
  return cfg;
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  Json root = Json::object();
  root["schema_version"] = kScenarioSchemaVersion;
  root["name"] = cfg.name;
  root["horizon_seconds"] = cfg.horizon_seconds;
  root["steps"] = cfg.steps;
  root["measurement"] = to_string(cfg.measurement);
  Json agents = Json::array();
  for (const auto& a : cfg.agents) {
    Json j = Json::object();
    j["name"] = a.name;
    j["initial_state"] = detail::to_json(VectorXd(a.initial_state));
    j["lane"] = points_to_json(a.cost.lane.points());
    j["lane_weight"] = a.cost.lane_weight;
    j["nominal_speed"] = a.cost.nominal_speed;
    j["speed_weight"] = a.cost.speed_weight;
    j["control_weights"] = detail::to_json(VectorXd(a.cost.control_weights));
    agents.push_back(std::move(j));
  }
  root["agents"] = std::move(agents);
  Json obstacles = Json::array();
  for (const auto& o : cfg.obstacles) {
    Json j = Json::object();
    j["name"] = o.name;
    if (const auto* d = std::get_if<Disc>(&o.shape)) {
      j["type"] = "disc";
      j["center"] = Json::array({d->center.x(), d->center.y()});
      j["radius"] = d->radius;
    } else {
      j["type"] = "polygon";
      j["vertices"] = points_to_json(std::get<ConvexPolygon>(o.shape).vertices);
    }
    obstacles.push_back(std::move(j));
  }
  root["obstacles"] = std::move(obstacles);
  Json constraints = Json::array();
  for (const auto& c : cfg.constraints) {
    Json j = Json::object();
    j["type"] = c.kind == ConstraintKind::kProximity ? "proximity" : "obstacle";
    j["agents"] = c.agents;
    if (c.kind == ConstraintKind::kProximity) {
      j["min_distance"] = c.min_distance;
    } else {
      j["obstacle"] = c.obstacle;
    }
    j["probability"] = c.probability;
    j["first_step"] = c.first_step;
    j["last_step"] = c.last_step;
    constraints.push_back(std::move(j));
  }
  root["constraints"] = std::move(constraints);
  Json noise = Json::object();
  noise["process"] = detail::covariance_to_json(cfg.process_noise);
  noise["measurement"] = detail::covariance_to_json(cfg.measurement_noise);
  noise["initial"] = detail::covariance_to_json(cfg.initial_covariance);
  root["noise"] = std::move(noise);
  root["solver"] = solver_to_json(cfg.solver);
  return detail::dump_compact(root);
}

GameSpec build_game_spec(const ScenarioConfig& cfg) {
  cfg.validate();
  const int N = cfg.num_agents();
  GameSpec spec;
  spec.horizon = cfg.steps;
  spec.dynamics = std::make_shared<UnicycleDynamics>(N, cfg.dt());
  if (cfg.measurement == MeasurementKind::kSpeedScaled) {
    spec.measurement = std::make_shared<SpeedScaledMeasurement>(N);
  } else {
    spec.measurement = std::make_shared<AdditiveMeasurement>(kAgentStateDim * N);
  }
  for (int i = 0; i < N; ++i) {
    spec.costs.push_back(std::make_shared<DrivingCost>(i, N, cfg.agents[i].cost));
  }
  for (const auto& c : cfg.constraints) {
    ChanceConstraint cc;
    cc.probability = c.probability;
    cc.first_step = c.first_step;
    cc.last_step = c.last_step;
    if (c.kind == ConstraintKind::kProximity) {
      cc.constraint = std::make_shared<ProximityConstraint>(c.agents[0], c.agents[1], c.min_distance);
    } else {
      cc.constraint = std::make_shared<ObstacleConstraint>(
          c.agents[0], find_obstacle(cfg, c.obstacle)->shape, c.obstacle);
    }
    spec.constraints.push_back(std::move(cc));
  }
  spec.noise.process = cfg.process_noise;
  spec.noise.measurement = cfg.measurement_noise;
  spec.initial_belief.mean = cfg.initial_state();
  spec.initial_belief.covariance = cfg.initial_covariance;
  spec.validate();
  return spec;
}

LoadedScenario load_scenario(const ScenarioConfig& config) {
  LoadedScenario out;
  out.config = config;
  out.spec = build_game_spec(config);
  out.solver = config.solver;
  return out;
}

LoadedScenario load_scenario(std::string_view text) { return load_scenario(parse_scenario(text)); }

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

LoadedScenario load_scenario_file(const std::filesystem::path& path) {
  return load_scenario(read_file(path));
}

// ---------------------------------------------------------------------------
// Builtin scenarios. Geometry and weights are artifact-defined.

namespace {

constexpr double kProbability = 0.9;
constexpr double kMinDistance = 3.0;

std::vector<Eigen::Vector2d> arc(const Eigen::Vector2d& center, double radius, double from,
                                 double to, int segments) {
  std::vector<Eigen::Vector2d> pts;
  for (int s = 0; s <= segments; ++s) {
    const double a = from + (to - from) * s / segments;
    pts.push_back(center + radius * Eigen::Vector2d(std::cos(a), std::sin(a)));
  }
  return pts;
}

AgentConfig agent(std::string name, Eigen::Vector4d x0, std::vector<Eigen::Vector2d> lane,
                  double nominal_speed, double lane_weight, double speed_weight,
                  Eigen::Vector2d control_weights) {
  AgentConfig a;
  a.name = std::move(name);
  a.initial_state = x0;
  a.cost.lane = Polyline(std::move(lane));
  a.cost.nominal_speed = nominal_speed;
  a.cost.lane_weight = lane_weight;
  a.cost.speed_weight = speed_weight;
  a.cost.control_weights = control_weights;
  return a;
}

void add_all_pairs(ScenarioConfig& cfg) {
  for (int i = 0; i < cfg.num_agents(); ++i) {
    for (int j = i + 1; j < cfg.num_agents(); ++j) {
      ConstraintConfig c;
      c.kind = ConstraintKind::kProximity;
      c.agents = {i, j};
      c.min_distance = kMinDistance;
      c.probability = kProbability;
      cfg.constraints.push_back(c);
    }
  }
}

void add_obstacle_for(ScenarioConfig& cfg, const std::string& obstacle, std::vector<int> agents) {
  for (int a : agents) {
    ConstraintConfig c;
    c.kind = ConstraintKind::kObstacle;
    c.agents = {a};
    c.obstacle = obstacle;
    c.probability = kProbability;
    cfg.constraints.push_back(c);
  }
}

void set_noise(ScenarioConfig& cfg) {
  const Eigen::Index n = kAgentStateDim * cfg.num_agents();
  cfg.process_noise = 0.05 * MatrixXd::Identity(n, n);
  cfg.measurement_noise = 0.05 * MatrixXd::Identity(n, n);
  cfg.initial_covariance = 0.01 * MatrixXd::Identity(n, n);
}

ScenarioConfig merge_scenario() {
  ScenarioConfig cfg;
  cfg.name = "merge";
  cfg.horizon_seconds = 3.0;
  cfg.steps = 20;
  cfg.measurement = MeasurementKind::kSpeedScaled;
  const Eigen::Vector2d controls(0.5, 0.5);
  // The ramp joins the main lane at (12, 0) with slope 1/4.
  const double ramp_heading = std::atan2(8.0, 32.0);
  cfg.agents.push_back(agent("main", {0.0, 0.0, 0.0, 2.0}, {{-10.0, 0.0}, {60.0, 0.0}}, 2.0, 50.0,
                             50.0, controls));
  cfg.agents.push_back(agent("ramp", {-6.0, -4.5, ramp_heading, 2.0},
                             {{-20.0, -8.0}, {12.0, 0.0}, {60.0, 0.0}}, 6.0, 50.0, 50.0,
                             controls));
  cfg.obstacles.push_back({"upper_post", Disc{{6.0, 2.4}, 1.0}});
  cfg.obstacles.push_back({"lower_post", Disc{{3.0, -3.6}, 1.0}});
  add_all_pairs(cfg);
  add_obstacle_for(cfg, "upper_post", {0, 1});
  add_obstacle_for(cfg, "lower_post", {0, 1});
  set_noise(cfg);
  return cfg;
}

ScenarioConfig intersection_scenario() {
  ScenarioConfig cfg;
  cfg.name = "intersection";
  cfg.horizon_seconds = 2.5;
  cfg.steps = 16;
  cfg.measurement = MeasurementKind::kAdditive;
  const Eigen::Vector2d controls(0.5, 0.5);
  const double pi = std::numbers::pi;
  const double offset = 3.0;  // lane center distance from the road axis
  cfg.agents.push_back(agent("eastbound", {-4.5, -offset, 0.0, 5.0},
                             {{-30.0, -offset}, {30.0, -offset}}, 5.0, 15.0, 15.0, controls));
  cfg.agents.push_back(agent("northbound", {offset, -10.5, pi / 2, 5.0},
                             {{offset, -30.0}, {offset, 30.0}}, 5.0, 15.0, 15.0, controls));
  cfg.agents.push_back(agent("westbound", {11.5, offset, pi, 5.0},
                             {{30.0, offset}, {-30.0, offset}}, 5.0, 15.0, 15.0, controls));
  add_all_pairs(cfg);
  set_noise(cfg);
  return cfg;
}

ScenarioConfig roundabout_scenario() {
  ScenarioConfig cfg;
  cfg.name = "roundabout";
  cfg.horizon_seconds = 2.5;
  cfg.steps = 16;
  cfg.measurement = MeasurementKind::kAdditive;
  const Eigen::Vector2d controls(0.5, 0.5);
  const double pi = std::numbers::pi;
  const double deg = pi / 180.0;
  const Eigen::Vector2d center(0.0, 0.0);
  const double radius = 10.0;

  // Counter-clockwise on the ring.
  const double a0 = -110.0 * deg;
  cfg.agents.push_back(agent("circulating",
                             {radius * std::cos(a0), radius * std::sin(a0), a0 + pi / 2, 3.0},
                             arc(center, radius, -150.0 * deg, 180.0 * deg, 33), 3.0, 20.0, 20.0,
                             controls));
  // Enters from the south along x = 3.
  auto south = std::vector<Eigen::Vector2d>{{3.0, -30.0}};
  for (const auto& p : arc(center, radius, -std::acos(3.0 / radius), pi, 25)) south.push_back(p);
  cfg.agents.push_back(agent("south_entry", {3.0, -14.0, pi / 2, 6.0}, south, 6.0, 20.0, 20.0,
                             controls));
  // Enters from the east along y = -3.
  auto east = std::vector<Eigen::Vector2d>{{30.0, -3.0}};
  for (const auto& p : arc(center, radius, std::asin(-3.0 / radius), pi, 20)) east.push_back(p);
  cfg.agents.push_back(agent("east_entry", {16.0, -3.0, pi, 5.0}, east, 5.0, 20.0, 20.0,
                             controls));

  cfg.obstacles.push_back({"island", Disc{center, 7.0}});
  add_all_pairs(cfg);
  add_obstacle_for(cfg, "island", {0, 1, 2});
  set_noise(cfg);
  return cfg;
}

}  // namespace

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = {"merge", "intersection", "roundabout"};
  return names;
}

ScenarioConfig builtin_scenario(const std::string& name) {
  if (name == "merge") return merge_scenario();
  if (name == "intersection") return intersection_scenario();
  if (name == "roundabout") return roundabout_scenario();
  std::string valid;
  for (const auto& n : builtin_scenario_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InvalidInputError("unknown scenario '" + name + "' (valid: " + valid + ")");
}

ScenarioConfig apply_overrides(const ScenarioConfig& config,
                               const std::vector<std::string>& overrides) {
  if (overrides.empty()) return config;
  Json root = detail::parse_json(serialize_scenario(config));
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidInputError("override '" + item + "' is not of the form path=value");
    }
    const std::string path = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    Json* node = &root;
    std::size_t start = 0;
    while (true) {
      const std::size_t dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
      Json* next = nullptr;
      if (node->is_array()) {
        std::size_t index = 0;
        const auto res = std::from_chars(key.data(), key.data() + key.size(), index);
        if (res.ec != std::errc() || res.ptr != key.data() + key.size() || index >= node->size()) {
          throw ValidationError(path, "bad array index '" + key + "'");
        }
        next = &(*node)[index];
      } else if (node->is_object()) {
        if (!node->contains(key)) throw ValidationError(path, "unknown field");
        next = &(*node)[key];
      } else {
        throw ValidationError(path, "cannot descend into a scalar");
      }
      if (dot == std::string::npos) {
        *next = std::move(value);
        break;
      }
      node = next;
      start = dot + 1;
    }
  }
  return parse_scenario(root.dump());
}

ScenarioConfig resolve_scenario(const std::string& reference) {
  for (const auto& n : builtin_scenario_names()) {
    if (n == reference) return builtin_scenario(n);
  }
  if (std::filesystem::exists(reference)) return load_scenario_file(reference).config;
  return builtin_scenario(reference);
}

}  // namespace chance_games
