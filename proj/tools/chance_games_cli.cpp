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

// Command-line front end: solve scenarios, run Monte Carlo suites and convert
// trajectory files.

#include "chance_games/ilq_solver.hpp"
#include "chance_games/io.hpp"
#include "chance_games/monte_carlo.hpp"
#include "chance_games/plots.hpp"
#include "chance_games/scenarios.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef CHANCE_GAMES_VERSION
#define CHANCE_GAMES_VERSION "0.0.0"
#endif

namespace cg = chance_games;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitNumerical = 4;

constexpr const char* kOutputRootEnv = "CHANCE_GAMES_OUTPUT_ROOT";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  return env != nullptr && *env != '\0' ? fs::path(env) : fs::current_path();
}

fs::path resolve_out(const std::string& out, const std::string& fallback) {
  const fs::path p = out.empty() ? fs::path(fallback) : fs::path(out);
  return p.is_absolute() ? p : output_root() / p;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string joined_command(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct SolveOptions {
  std::string scenario;
  std::string mode = "augmented-lagrangian";
  std::optional<double> weight;
  std::vector<std::string> overrides;
  std::string out;
};

struct PreparedRun {
  cg::ScenarioConfig config;
  cg::LoadedScenario loaded;
  std::vector<std::string> overrides;
};

PreparedRun prepare(const SolveOptions& opt) {
  PreparedRun run;
  cg::ScenarioConfig cfg;
  try {
    cfg = cg::resolve_scenario(opt.scenario);
  } catch (const cg::InvalidInputError& e) {
    throw UsageError(e.what());
  }
  run.overrides = opt.overrides;
  run.overrides.push_back("solver.mode=\"" + opt.mode + "\"");
  if (opt.weight) run.overrides.push_back("solver.fixed_penalty_weight=" + cg::format_double(*opt.weight));
  if (opt.weight && opt.mode != "fixed-penalty") {
    throw UsageError("--weight only applies to --mode fixed-penalty");
  }
  run.config = cg::apply_overrides(cfg, run.overrides);
  run.loaded = cg::load_scenario(run.config);
  return run;
}

void add_solve_options(CLI::App* cmd, SolveOptions& opt) {
  cmd->add_option("scenario", opt.scenario, "Builtin scenario name or scenario file")->required();
  cmd->add_option("--mode", opt.mode, "Solver mode")
      ->check(CLI::IsMember({"augmented-lagrangian", "fixed-penalty"}));
  cmd->add_option("--weight", opt.weight, "Penalty weight for --mode fixed-penalty")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--set", opt.overrides, "Scenario override path=value (repeatable)");
  cmd->add_option("--out", opt.out, "Output directory (relative paths resolve against $" +
                                        std::string(kOutputRootEnv) + ")");
}

// Writes the solve artifacts and returns their paths.
std::vector<std::string> write_solution(const fs::path& dir, const PreparedRun& run,
                                        const cg::Solution& sol) {
  const auto doc = cg::make_trajectory_document(run.config.name, run.loaded.spec, sol.trajectory);
  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    outputs.push_back((dir / name).string());
  };
  emit("trajectory.json", cg::trajectory_to_json(doc));
  emit("diagnostics.json", cg::diagnostics_to_json(sol));
  emit("trajectory.svg", cg::trajectory_svg(run.config, sol.trajectory));
  emit("scenario.json", cg::serialize_scenario(run.config));
  return outputs;
}

void write_manifest(const fs::path& dir, cg::RunManifest manifest) {
  manifest.version = CHANCE_GAMES_VERSION;
  manifest.outputs.push_back((dir / "manifest.json").string());
  write_file(dir / "manifest.json", cg::manifest_to_json(manifest));
}

int cmd_solve(const SolveOptions& opt, const std::string& command) {
  const auto start = std::chrono::steady_clock::now();
  const PreparedRun run = prepare(opt);
  const fs::path dir = resolve_out(opt.out, run.config.name + "-" + opt.mode);
  cg::RunManifest manifest{command, opt.scenario, run.overrides, opt.mode, {}, {}, 0.0, {}};
  cg::Solution sol;
  try {
    sol = cg::outer_solve(run.loaded.spec, run.loaded.solver);
  } catch (const cg::NumericalError& e) {
    write_file(dir / "error.txt", std::string(e.what()) + "\n");
    manifest.outputs.push_back((dir / "error.txt").string());
    manifest.wall_time_seconds = seconds_since(start);
    write_manifest(dir, manifest);
    throw;
  }
  manifest.outputs = write_solution(dir, run, sol);
  manifest.wall_time_seconds = seconds_since(start);
  write_manifest(dir, manifest);

  std::cout << run.config.name << " [" << opt.mode << "] "
            << (sol.diagnostics.converged ? "converged" : "NOT converged")
            << ", outer iterations " << sol.diagnostics.outer.size() << ", max surrogate violation "
            << cg::format_double(sol.diagnostics.final_violation) << "\n"
            << "artifacts: " << dir.string() << "\n";
  return sol.diagnostics.converged ? kExitOk : kExitNotConverged;
}

struct MonteCarloOptions {
  SolveOptions solve;
  int trials = 100;
  std::uint64_t seed = 0;
  bool serial = false;
};

int cmd_montecarlo(const MonteCarloOptions& opt, const std::string& command) {
  if (opt.trials < 1) throw UsageError("--trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const PreparedRun run = prepare(opt.solve);
  const fs::path dir = resolve_out(opt.solve.out, run.config.name + "-" + opt.solve.mode + "-montecarlo");
  const cg::Solution sol = cg::outer_solve(run.loaded.spec, run.loaded.solver);
  const cg::MonteCarloReport report =
      opt.serial ? cg::run_trials_serial(sol, run.loaded.spec, opt.trials, opt.seed)
                 : cg::run_trials(sol, run.loaded.spec, opt.trials, opt.seed);

  cg::RunManifest manifest{command, opt.solve.scenario, run.overrides, opt.solve.mode, {}, {}, 0.0, {}};
  manifest.seeds = report.seeds;
  manifest.outputs = write_solution(dir, run, sol);
  write_file(dir / "report.json", cg::report_to_json(report));
  write_file(dir / "histogram.svg", cg::violation_histogram_svg(report, run.config.name));
  manifest.outputs.push_back((dir / "report.json").string());
  manifest.outputs.push_back((dir / "histogram.svg").string());
  manifest.wall_time_seconds = seconds_since(start);
  write_manifest(dir, manifest);

  std::cout << run.config.name << " [" << opt.solve.mode << "] " << report.trials
            << " trials, satisfaction rate " << cg::format_double(report.satisfaction_rate)
            << (sol.diagnostics.converged ? "" : " (solver did NOT converge)") << "\n"
            << "artifacts: " << dir.string() << "\n";
  return sol.diagnostics.converged ? kExitOk : kExitNotConverged;
}

struct ExportOptions {
  std::string input;
  std::string format;
  std::string out;
};

int cmd_export(const ExportOptions& opt) {
  const std::string text = read_file(opt.input);
  std::string converted;
  if (opt.format == "csv") {
    converted = cg::trajectory_to_csv(cg::trajectory_from_json(text));
  } else {
    converted = cg::trajectory_to_json(cg::trajectory_from_csv(text));
  }
  if (opt.out.empty()) {
    std::cout << converted;
  } else {
    write_file(resolve_out(opt.out, opt.out), converted);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chance-constrained stochastic dynamic games"};
  app.set_version_flag("--version", CHANCE_GAMES_VERSION);
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "Solve a scenario and write trajectory artifacts");
  add_solve_options(solve, solve_opt);

  MonteCarloOptions mc_opt;
  auto* mc = app.add_subcommand("montecarlo", "Solve a scenario and evaluate it in noisy closed loop");
  add_solve_options(mc, mc_opt.solve);
  mc->add_option("--trials", mc_opt.trials, "Number of trials")->required();
  mc->add_option("--seed", mc_opt.seed, "Base seed; trial t uses seed + t")->required();
  mc->add_flag("--serial", mc_opt.serial, "Run trials on one thread");

  ExportOptions export_opt;
  auto* exp = app.add_subcommand("export", "Convert a trajectory between JSON and CSV");
  exp->add_option("file", export_opt.input, "Input trajectory file")->required();
  exp->add_option("--format", export_opt.format, "Output format")
      ->required()
      ->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--out", export_opt.out, "Output file (default: stdout)");

  auto* scen = app.add_subcommand("scenarios", "List or print builtin scenarios");
  std::string show_name;
  scen->add_option("name", show_name, "Print this scenario in canonical form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string command = joined_command(argc, argv);
  try {
    if (*solve) return cmd_solve(solve_opt, command);
    if (*mc) return cmd_montecarlo(mc_opt, command);
    if (*exp) return cmd_export(export_opt);
    if (*scen) {
      if (show_name.empty()) {
        for (const auto& n : cg::builtin_scenario_names()) std::cout << n << "\n";
      } else {
        std::cout << cg::serialize_scenario(cg::builtin_scenario(show_name));
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cg::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cg::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
