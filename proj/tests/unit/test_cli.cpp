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


// Drives the command-line tool as a subprocess.

#include "chance_games/io.hpp"

#include "json.hpp"
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace cg = chance_games;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::path(CHANCE_GAMES_TEST_OUTPUT_DIR) / "cli";

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

CliRun run(const std::string& args) {
  fs::create_directories(kRoot);
  static int counter = 0;
  const fs::path out = kRoot / ("stdout_" + std::to_string(counter) + ".txt");
  const fs::path err = kRoot / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = "CHANCE_GAMES_OUTPUT_ROOT='" + kRoot.string() + "' '" +
                          std::string(CHANCE_GAMES_CLI) + "' " + args + " > '" + out.string() +
                          "' 2> '" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  CliRun r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read(out);
  r.err = read(err);
  return r;
}

TEST(Cli, SolveMergeConverges) {
  const CliRun r = run("solve merge --out solve_merge");
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* f : {"trajectory.json", "diagnostics.json", "manifest.json", "trajectory.svg",
                        "scenario.json"}) {
    EXPECT_TRUE(fs::exists(kRoot / "solve_merge" / f)) << f;
  }
  const auto diag = nlohmann::json::parse(read(kRoot / "solve_merge" / "diagnostics.json"));
  EXPECT_TRUE(diag["converged"].get<bool>());
  const auto doc = cg::trajectory_from_json(read(kRoot / "solve_merge" / "trajectory.json"));
  EXPECT_EQ(doc.horizon(), 20);
  EXPECT_EQ(doc.covariances.size(), 21u);
  const auto manifest = nlohmann::json::parse(read(kRoot / "solve_merge" / "manifest.json"));
  EXPECT_EQ(manifest["scenario"], "merge");
  EXPECT_EQ(manifest["mode"], "augmented-lagrangian");
}

TEST(Cli, FixedPenaltyBaselineReportsNonConvergence) {
  const CliRun r = run("solve merge --mode fixed-penalty --weight 1 --out solve_fixed");
  EXPECT_EQ(r.status, 3) << r.err;
  EXPECT_TRUE(fs::exists(kRoot / "solve_fixed" / "trajectory.json"));
  const auto diag = nlohmann::json::parse(read(kRoot / "solve_fixed" / "diagnostics.json"));
  EXPECT_FALSE(diag["converged"].get<bool>());
  EXPECT_GT(diag["final_violation"].get<double>(), 0.0);
  EXPECT_EQ(diag["mode"], "fixed-penalty");
}

TEST(Cli, UnknownScenarioIsUsageError) {
  const CliRun r = run("solve highway");
  EXPECT_EQ(r.status, 2);
  for (const char* name : {"merge", "intersection", "roundabout"}) {
    EXPECT_NE(r.err.find(name), std::string::npos) << r.err;
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("solve merge --weight 2").status, 2);
  EXPECT_EQ(run("montecarlo merge --trials 0 --seed 1").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("solve merge --set constraints.0.probability=2").status, 2);
  EXPECT_EQ(run("").status, 2);
}

TEST(Cli, OverridesAreApplied) {
  const CliRun r = run("solve merge --set steps=10 --out solve_short");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(cg::trajectory_from_json(read(kRoot / "solve_short" / "trajectory.json")).horizon(), 10);
  const auto manifest = nlohmann::json::parse(read(kRoot / "solve_short" / "manifest.json"));
  EXPECT_EQ(manifest["overrides"][0], "steps=10");
}

TEST(Cli, MonteCarloReportIsReproducible) {
  const CliRun a = run("montecarlo merge --trials 100 --seed 7 --out mc_a");
  const CliRun b = run("montecarlo merge --trials 100 --seed 7 --out mc_b --serial");
  ASSERT_EQ(a.status, 0) << a.err;
  ASSERT_EQ(b.status, 0) << b.err;
  const std::string ra = read(kRoot / "mc_a" / "report.json");
  EXPECT_EQ(ra, read(kRoot / "mc_b" / "report.json"));
  EXPECT_EQ(read(kRoot / "mc_a" / "trajectory.json"), read(kRoot / "mc_b" / "trajectory.json"));
  const auto report = nlohmann::json::parse(ra);
  EXPECT_TRUE(report.contains("satisfaction_rate"));
  EXPECT_EQ(report["trials"], 100);
  EXPECT_TRUE(fs::exists(kRoot / "mc_a" / "histogram.svg"));
}

TEST(Cli, ExportRoundTrip) {
  ASSERT_EQ(run("solve roundabout --out export_src").status, 0);
  const fs::path json = kRoot / "export_src" / "trajectory.json";
  const CliRun to_csv = run("export '" + json.string() + "' --format csv --out export/traj.csv");
  ASSERT_EQ(to_csv.status, 0) << to_csv.err;
  const CliRun back = run("export '" + (kRoot / "export" / "traj.csv").string() + "' --format json");
  ASSERT_EQ(back.status, 0) << back.err;
  const auto original = cg::trajectory_from_json(read(json));
  const auto restored = cg::trajectory_from_json(back.out);
  ASSERT_EQ(original.means.size(), restored.means.size());
  for (std::size_t k = 0; k < original.means.size(); ++k) {
    EXPECT_EQ(original.means[k], restored.means[k]);
  }
  for (std::size_t k = 0; k < original.controls.size(); ++k) {
    for (std::size_t i = 0; i < original.controls[k].size(); ++i) {
      EXPECT_EQ(original.controls[k][i], restored.controls[k][i]);
    }
  }
}

TEST(Cli, ExportTruncatedFileFails) {
  cg::TrajectoryDocument doc;
  doc.num_agents = 1;
  doc.means = {Eigen::VectorXd::Zero(4), Eigen::VectorXd::Ones(4)};
  doc.controls = {{Eigen::VectorXd::Zero(2)}};
  const std::string csv = cg::trajectory_to_csv(doc);
  write(kRoot / "truncated.csv", csv.substr(0, csv.size() - 3));
  const CliRun r = run("export '" + (kRoot / "truncated.csv").string() + "' --format json");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("byte"), std::string::npos) << r.err;

  const std::string json = cg::trajectory_to_json(doc);
  write(kRoot / "truncated.json", json.substr(0, json.size() / 2));
  EXPECT_EQ(run("export '" + (kRoot / "truncated.json").string() + "' --format csv").status, 2);
}

TEST(Cli, ExportEmptyTrajectoryIsHeaderOnly) {
  cg::TrajectoryDocument empty;
  empty.num_agents = 2;
  write(kRoot / "empty.json", cg::trajectory_to_json(empty));
  const CliRun r = run("export '" + (kRoot / "empty.json").string() + "' --format csv");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "k,agent,x,y,heading,speed,yaw_rate,acceleration\n");
}

TEST(Cli, ScenariosCommand) {
  const CliRun list = run("scenarios");
  ASSERT_EQ(list.status, 0);
  EXPECT_EQ(list.out, "merge\nintersection\nroundabout\n");
  const CliRun show = run("scenarios intersection");
  ASSERT_EQ(show.status, 0);
  EXPECT_EQ(nlohmann::json::parse(show.out)["name"], "intersection");
}

}  // namespace
