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


#include "chance_games/io.hpp"
#include "chance_games/plots.hpp"
#include "chance_games/scenarios.hpp"

#include "json.hpp"
#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace cg = chance_games;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Builtins, Shapes) {
  const auto merge = cg::load_scenario(cg::builtin_scenario("merge"));
  EXPECT_EQ(merge.spec.num_players(), 2);
  EXPECT_EQ(merge.spec.horizon, 20);
  EXPECT_NEAR(merge.spec.dt(), 0.15, 1e-15);
  EXPECT_FALSE(merge.config.obstacles.empty());

  const auto inter = cg::load_scenario(cg::builtin_scenario("intersection"));
  EXPECT_EQ(inter.spec.num_players(), 3);
  EXPECT_EQ(inter.spec.horizon, 16);
  EXPECT_DOUBLE_EQ(inter.spec.dt(), 0.15625);

  const auto round = cg::load_scenario(cg::builtin_scenario("roundabout"));
  EXPECT_EQ(round.spec.num_players(), 3);
  EXPECT_DOUBLE_EQ(round.spec.dt(), 0.15625);
  // Lanes follow the ring.
  const auto& lane = round.config.agents[0].cost.lane.points();
  EXPECT_GT(lane.size(), 10u);
  EXPECT_NEAR(lane[5].norm(), 10.0, 1e-9);
}

TEST(Builtins, ThresholdsAndDistances) {
  for (const auto& name : cg::builtin_scenario_names()) {
    const auto cfg = cg::builtin_scenario(name);
    EXPECT_NO_THROW(cfg.validate());
    for (const auto& c : cfg.constraints) {
      EXPECT_EQ(c.probability, 0.9);
      if (c.kind == cg::ConstraintKind::kProximity) EXPECT_EQ(c.min_distance, 3.0);
    }
    EXPECT_TRUE(cfg.process_noise.isApprox(0.05 * MatrixXd::Identity(cfg.process_noise.rows(), cfg.process_noise.cols())));
    EXPECT_TRUE(cfg.measurement_noise.isApprox(0.05 * MatrixXd::Identity(cfg.measurement_noise.rows(), cfg.measurement_noise.cols())));
  }
}

TEST(Builtins, UnknownNameListsValidOnes) {
  try {
    cg::builtin_scenario("highway");
    FAIL() << "expected InvalidInputError";
  } catch (const cg::InvalidInputError& e) {
    const std::string msg = e.what();
    for (const auto& name : cg::builtin_scenario_names()) {
      EXPECT_NE(msg.find(name), std::string::npos) << msg;
    }
  }
}

TEST(ScenarioFiles, ShippedFilesAreCanonical) {
  const std::filesystem::path dir = std::filesystem::path(CHANCE_GAMES_SOURCE_DIR) / "scenarios";
  for (const auto& name : cg::builtin_scenario_names()) {
    const auto path = dir / (name + ".json");
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(read(path), cg::serialize_scenario(cg::builtin_scenario(name))) << name;
    EXPECT_TRUE(cg::load_scenario_file(path).config == cg::builtin_scenario(name));
  }
}

TEST(ScenarioFiles, RoundTrip) {
  for (const auto& name : cg::builtin_scenario_names()) {
    const auto cfg = cg::builtin_scenario(name);
    const std::string text = cg::serialize_scenario(cfg);
    const auto parsed = cg::parse_scenario(text);
    EXPECT_TRUE(parsed == cfg) << name;
    EXPECT_EQ(cg::serialize_scenario(parsed), text);
    const auto a = cg::load_scenario(cfg).spec;
    const auto b = cg::load_scenario(text).spec;
    EXPECT_EQ(a.horizon, b.horizon);
    EXPECT_EQ(a.dt(), b.dt());
    EXPECT_EQ(a.initial_belief.mean, b.initial_belief.mean);
    EXPECT_EQ(a.initial_belief.covariance, b.initial_belief.covariance);
    EXPECT_EQ(a.noise.process, b.noise.process);
    ASSERT_EQ(a.constraints.size(), b.constraints.size());
    for (std::size_t i = 0; i < a.constraints.size(); ++i) {
      EXPECT_EQ(a.constraints[i].constraint->describe(), b.constraints[i].constraint->describe());
      EXPECT_EQ(a.constraints[i].probability, b.constraints[i].probability);
    }
  }
}

nlohmann::json merge_json() {
  return nlohmann::json::parse(cg::serialize_scenario(cg::builtin_scenario("merge")));
}

TEST(ScenarioFiles, ProbabilityOutOfRange) {
  auto doc = merge_json();
  doc["constraints"][0]["probability"] = 1.5;
  try {
    cg::parse_scenario(doc.dump());
    FAIL() << "expected ValidationError";
  } catch (const cg::ValidationError& e) {
    EXPECT_NE(e.field().find("probability"), std::string::npos) << e.field();
    EXPECT_NE(e.field().find("constraints"), std::string::npos) << e.field();
  }
}

TEST(ScenarioFiles, UnknownFieldIsNamed) {
  auto doc = merge_json();
  doc["agents"][1]["colour"] = "blue";
  try {
    cg::parse_scenario(doc.dump());
    FAIL() << "expected ValidationError";
  } catch (const cg::ValidationError& e) {
    EXPECT_NE(e.field().find("colour"), std::string::npos) << e.field();
  }
}

TEST(ScenarioFiles, MistypedAndMissingFields) {
  auto doc = merge_json();
  doc["steps"] = "twenty";
  EXPECT_THROW(cg::parse_scenario(doc.dump()), cg::ValidationError);
  doc = merge_json();
  doc.erase("agents");
  EXPECT_THROW(cg::parse_scenario(doc.dump()), cg::ValidationError);
  doc = merge_json();
  doc["noise"]["process"] = -1.0;
  EXPECT_THROW(cg::parse_scenario(doc.dump()), cg::ValidationError);
}

TEST(ScenarioFiles, MalformedTextReportsOffset) {
  const std::string text = "{\"name\": \"x\", \"steps\": }";
  try {
    cg::parse_scenario(text);
    FAIL() << "expected ParseError";
  } catch (const cg::ParseError& e) {
    EXPECT_GT(e.byte_offset(), 20u);
    EXPECT_LE(e.byte_offset(), text.size());
  }
}

TEST(ScenarioFiles, CovarianceForms) {
  auto doc = merge_json();
  doc["noise"]["process"] = 0.2;
  doc["noise"]["measurement"] = {{"diagonal", {1, 2, 3, 4, 5, 6, 7, 8}}};
  const auto cfg = cg::parse_scenario(doc.dump());
  EXPECT_TRUE(cfg.process_noise.isApprox(0.2 * MatrixXd::Identity(8, 8)));
  EXPECT_EQ(cfg.measurement_noise(3, 3), 4.0);
  EXPECT_EQ(cfg.measurement_noise(0, 1), 0.0);
  // Canonical form re-parses to the same matrices.
  EXPECT_TRUE(cg::parse_scenario(cg::serialize_scenario(cfg)) == cfg);
}

TEST(Overrides, ApplyAndValidate) {
  const auto base = cg::builtin_scenario("merge");
  const auto cfg = cg::apply_overrides(
      base, {"agents.1.nominal_speed=7.5", "solver.mode=fixed-penalty", "steps=10"});
  EXPECT_EQ(cfg.agents[1].cost.nominal_speed, 7.5);
  EXPECT_EQ(cfg.solver.mode, cg::PenaltyMode::kFixedPenalty);
  EXPECT_EQ(cfg.steps, 10);
  EXPECT_THROW(cg::apply_overrides(base, {"agents.9.nominal_speed=1"}), cg::ValidationError);
  EXPECT_THROW(cg::apply_overrides(base, {"nonsense=1"}), cg::ValidationError);
  EXPECT_THROW(cg::apply_overrides(base, {"constraints.0.probability=0.3"}), cg::ValidationError);
  EXPECT_THROW(cg::apply_overrides(base, {"no-equals-sign"}), cg::InvalidInputError);
}

TEST(Resolve, BuiltinOrFile) {
  EXPECT_TRUE(cg::resolve_scenario("merge") == cg::builtin_scenario("merge"));
  const auto path = std::filesystem::path(CHANCE_GAMES_SOURCE_DIR) / "scenarios" / "roundabout.json";
  EXPECT_TRUE(cg::resolve_scenario(path.string()) == cg::builtin_scenario("roundabout"));
  EXPECT_THROW(cg::resolve_scenario("no/such/file.json"), cg::InvalidInputError);
}

cg::TrajectoryDocument sample_document() {
  const auto loaded = cg::load_scenario(cg::builtin_scenario("intersection"));
  const auto traj = cg::rollout_controls(
      loaded.spec, std::vector<cg::ControlSet>(loaded.spec.horizon, loaded.spec.dynamics->zero_controls()));
  auto doc = cg::make_trajectory_document("intersection", loaded.spec, traj);
  // Awkward values for the text round trip.
  doc.means[1](0) = 0.1 + 0.2;
  doc.means[2](1) = -1e-300;
  doc.controls[0][1](0) = std::nextafter(1.0, 2.0);
  doc.controls[3][2](1) = 123456789.123456789;
  return doc;
}

TEST(TrajectoryJson, RoundTripIsExact) {
  const auto doc = sample_document();
  const std::string text = cg::trajectory_to_json(doc);
  const auto back = cg::trajectory_from_json(text);
  EXPECT_EQ(back.scenario, doc.scenario);
  EXPECT_EQ(back.num_agents, 3);
  ASSERT_TRUE(back.dt.has_value());
  EXPECT_EQ(*back.dt, *doc.dt);
  ASSERT_EQ(back.means.size(), doc.means.size());
  for (std::size_t k = 0; k < doc.means.size(); ++k) {
    EXPECT_EQ(back.means[k], doc.means[k]);
    EXPECT_EQ(back.covariances[k], doc.covariances[k]);
  }
  for (std::size_t k = 0; k < doc.controls.size(); ++k)
    for (int i = 0; i < 3; ++i) EXPECT_EQ(back.controls[k][i], doc.controls[k][i]);
  EXPECT_EQ(cg::trajectory_to_json(back), text);

  const auto json = nlohmann::json::parse(text);
  EXPECT_EQ(json["schema_version"], cg::kTrajectorySchemaVersion);
  EXPECT_TRUE(json["steps"].back()["controls"].is_null());
  // 12 x 12 lower triangle, packed by rows.
  ASSERT_EQ(json["steps"][0]["covariance"].size(), 12u);
  EXPECT_EQ(json["steps"][0]["covariance"][11].size(), 12u);
}

TEST(TrajectoryJson, RejectsBadInput) {
  const std::string text = cg::trajectory_to_json(sample_document());
  EXPECT_THROW(cg::trajectory_from_json(text.substr(0, text.size() / 2)), cg::ParseError);
  auto json = nlohmann::json::parse(text);
  json["schema_version"] = 99;
  EXPECT_THROW(cg::trajectory_from_json(json.dump()), cg::ValidationError);
  json = nlohmann::json::parse(text);
  json["extra"] = 1;
  EXPECT_THROW(cg::trajectory_from_json(json.dump()), cg::ValidationError);
}

TEST(TrajectoryCsv, RoundTripPreservesMeansAndControls) {
  const auto doc = sample_document();
  const std::string csv = cg::trajectory_to_csv(doc);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,agent,x,y,heading,speed,yaw_rate,acceleration");
  const auto back = cg::trajectory_from_csv(csv);
  EXPECT_EQ(back.num_agents, 3);
  EXPECT_TRUE(back.covariances.empty());
  ASSERT_EQ(back.means.size(), doc.means.size());
  for (std::size_t k = 0; k < doc.means.size(); ++k) EXPECT_EQ(back.means[k], doc.means[k]);
  for (std::size_t k = 0; k < doc.controls.size(); ++k)
    for (int i = 0; i < 3; ++i) EXPECT_EQ(back.controls[k][i], doc.controls[k][i]);
  // json -> csv -> json keeps means exactly.
  const auto via = cg::trajectory_from_json(cg::trajectory_to_json(back));
  for (std::size_t k = 0; k < doc.means.size(); ++k) EXPECT_EQ(via.means[k], doc.means[k]);
  // One row per timestep per agent plus the header.
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 17);
}

TEST(TrajectoryCsv, TruncatedInputReportsOffset) {
  const std::string csv = cg::trajectory_to_csv(sample_document());
  const std::string cut = csv.substr(0, csv.size() - 7);
  try {
    cg::trajectory_from_csv(cut);
    FAIL() << "expected ParseError";
  } catch (const cg::ParseError& e) {
    EXPECT_EQ(e.byte_offset(), cut.size());
  }
  std::string bad = csv;
  const std::size_t second_line = bad.find('\n') + 1;
  bad.replace(bad.find(',', second_line + 2) + 1, 1, "#");
  try {
    cg::trajectory_from_csv(bad);
    FAIL() << "expected ParseError";
  } catch (const cg::ParseError& e) {
    EXPECT_GT(e.byte_offset(), second_line);
    EXPECT_LT(e.byte_offset(), bad.find('\n', second_line));
  }
}

TEST(TrajectoryCsv, EmptyTrajectoryIsHeaderOnly) {
  cg::TrajectoryDocument empty;
  empty.num_agents = 2;
  const std::string csv = cg::trajectory_to_csv(empty);
  EXPECT_EQ(csv, "k,agent,x,y,heading,speed,yaw_rate,acceleration\n");
  EXPECT_TRUE(cg::trajectory_from_csv(csv).means.empty());
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-310, 1e300, 0.0, 123.0}) {
    EXPECT_EQ(std::strtod(cg::format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(cg::format_double(0.5), "0.5");
  EXPECT_THROW(cg::format_double(std::numeric_limits<double>::infinity()), cg::InvalidInputError);
}

TEST(Reports, JsonShapes) {
  cg::MonteCarloReport r;
  r.trials = 2;
  r.satisfied_count = 1;
  r.satisfaction_rate = 0.5;
  r.seeds = {7, 8};
  r.max_violations = {-0.2, 0.3};
  r.satisfied = {true, false};
  r.cost_mean = {1.0};
  r.cost_stddev = {0.1};
  r.violation_histogram = cg::make_histogram(r.max_violations, 4);
  const auto json = nlohmann::json::parse(cg::report_to_json(r));
  EXPECT_EQ(json["satisfaction_rate"], 0.5);
  EXPECT_EQ(json["trials"], 2);
  EXPECT_EQ(json["histogram"]["counts"].size(), 4u);

  cg::RunManifest m;
  m.command = "chance_games solve merge";
  m.scenario = "merge";
  m.mode = "augmented-lagrangian";
  m.version = "0.1.0";
  m.outputs = {"trajectory.json"};
  const auto mj = nlohmann::json::parse(cg::manifest_to_json(m));
  for (const char* key : {"command", "scenario", "overrides", "mode", "seeds", "version",
                          "wall_time_seconds", "outputs"}) {
    EXPECT_TRUE(mj.contains(key)) << key;
  }
}

TEST(Plots, SvgDocuments) {
  const auto cfg = cg::builtin_scenario("merge");
  const auto loaded = cg::load_scenario(cfg);
  const auto traj = cg::rollout_controls(
      loaded.spec, std::vector<cg::ControlSet>(loaded.spec.horizon, loaded.spec.dynamics->zero_controls()));
  const std::string svg = cg::trajectory_svg(cfg, traj);
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  EXPECT_NE(svg.find("<ellipse"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);

  cg::MonteCarloReport r;
  r.trials = 3;
  r.max_violations = {-1.0, -0.5, 0.2};
  r.violation_histogram = cg::make_histogram(r.max_violations, 5);
  const std::string hist = cg::violation_histogram_svg(r, "merge");
  EXPECT_NE(hist.find("<rect"), std::string::npos);
  EXPECT_NE(hist.find("</svg>"), std::string::npos);
}

}  // namespace
