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
#include "chance_games/game_spec.hpp"
#include "chance_games/ilq_solver.hpp"

#include <cstdint>
#include <vector>

namespace chance_games {

struct TrialResult {
  std::uint64_t seed = 0;
  std::vector<VectorXd> states;      // true x_0..x_L
  std::vector<VectorXd> estimates;   // filter means
  std::vector<ControlSet> controls;  // u_0..u_{L-1}
  double max_violation = 0.0;        // max over (k, m) of the nonlinear g
  bool satisfied = true;             // max_violation <= 0
  std::vector<double> costs;         // realized per-player cost
};

struct Histogram {
  std::vector<double> edges;  // bins + 1, increasing
  std::vector<int> counts;
};

struct MonteCarloReport {
  int trials = 0;
  int satisfied_count = 0;
  double satisfaction_rate = 0.0;
  Histogram violation_histogram;
  std::vector<std::uint64_t> seeds;
  std::vector<double> max_violations;
  std::vector<bool> satisfied;
  std::vector<double> cost_mean;    // per player
  std::vector<double> cost_stddev;  // per player, sample standard deviation
};

// Everything a trial needs that does not depend on the seed.
struct ClosedLoopContext {
  const GameSpec* spec = nullptr;
  const Solution* solution = nullptr;
  FilterSchedule filter;
  MatrixXd initial_root;
  MatrixXd process_root;
  MatrixXd measurement_root;
};

ClosedLoopContext make_closed_loop_context(const Solution& solution, const GameSpec& spec);

// One noisy closed-loop execution: the true state follows the nonlinear
// dynamics, the estimate follows the filter linearized along the solution's
// nominal, and every player applies its policy to the estimate.
TrialResult simulate_closed_loop(const ClosedLoopContext& context, std::uint64_t seed);
TrialResult simulate_closed_loop(const Solution& solution, const GameSpec& spec,
                                 std::uint64_t seed);

// Trials with seeds base_seed..base_seed+n-1, run in parallel with OpenMP.
MonteCarloReport run_trials(const Solution& solution, const GameSpec& spec, int n,
                            std::uint64_t base_seed);

// Same report computed on one thread.
MonteCarloReport run_trials_serial(const Solution& solution, const GameSpec& spec, int n,
                                   std::uint64_t base_seed);

// Aggregates trials in the given order.
MonteCarloReport summarize_trials(const std::vector<TrialResult>& trials, int bins = 20);

// Equal-width bins over [min(0, lo), max(0, hi)]; the last bin is closed.
Histogram make_histogram(const std::vector<double>& values, int bins);

}  // namespace chance_games
