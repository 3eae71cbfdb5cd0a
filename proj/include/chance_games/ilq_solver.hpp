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

#include "chance_games/augmented_lagrangian.hpp"
#include "chance_games/belief.hpp"
#include "chance_games/game_spec.hpp"
#include "chance_games/lq_game.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chance_games {

enum class PenaltyMode {
  kAugmentedLagrangian,
  // Fixed quadratic penalty weight, no multipliers: the soft-penalty baseline.
  kFixedPenalty,
};

std::string to_string(PenaltyMode mode);
PenaltyMode penalty_mode_from_string(const std::string& name);

struct SolverConfig {
  double inner_tolerance = 1e-2;  // max nominal mean change between iterations
  int inner_max_iterations = 50;
  double outer_tolerance = 1e-3;  // on max_surrogate_violation
  int outer_max_iterations = 20;
  double line_search_factor = 0.5;
  int line_search_max_trials = 10;
  double initial_penalty = 10.0;
  double penalty_growth = 5.0;
  double penalty_cap = 1e8;
  PenaltyMode mode = PenaltyMode::kAugmentedLagrangian;
  double fixed_penalty_weight = 1.0;

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

// Quadratic approximations of every player's AL-augmented cost along a nominal.
struct CostApproximation {
  std::vector<std::vector<PlayerQuadratic>> stages;  // [k][player], k = 0..L-1
  std::vector<TerminalQuadratic> terminal;           // [player]
};

// Surrogate values c = G x_k + q + rho of each linearized constraint at `trajectory`.
std::vector<double> surrogate_values(std::span<const LinearizedConstraint> constraints,
                                     const BeliefTrajectory& trajectory);

// Gate per slot, evaluated at `trajectory`.
std::vector<double> penalty_gates(std::span<const LinearizedConstraint> constraints,
                                  const MultiplierState& multipliers,
                                  const BeliefTrajectory& trajectory);

// Hessians and gradients of each player's cost at (x_bar_k, u_bar_k) plus the
// AL increments (identical for all players) of every constraint slot. State
// Hessians with a negative eigenvalue and control Hessians R^{ii} with an
// eigenvalue below 1e-6 are projected by clamping eigenvalues at 1e-6.
CostApproximation quadraticize_costs(const GameSpec& spec, const BeliefTrajectory& nominal,
                                     std::span<const LinearizedConstraint> constraints,
                                     std::span<const double> lambda,
                                     std::span<const double> gates);

LQGame assemble_lq_game(const GameSpec& spec, const BeliefTrajectory& nominal,
                        CostApproximation costs);

// Linearize + quadraticize at `nominal` with gates evaluated there.
LQGame build_lq_game(const GameSpec& spec, const BeliefTrajectory& nominal,
                     std::span<const LinearizedConstraint> constraints,
                     const MultiplierState& multipliers);

// Realized per-player costs (running + terminal) along a zero-noise trajectory.
std::vector<double> player_costs(const GameSpec& spec, const BeliefTrajectory& trajectory);

// Sum of players' AL-augmented costs: sum_i J_i + N sum_slots (lambda c + gate/2 c^2).
double augmented_merit(const GameSpec& spec, const BeliefTrajectory& trajectory,
                       std::span<const LinearizedConstraint> constraints,
                       const MultiplierState& multipliers);

struct InnerIterationRecord {
  double merit = 0.0;  // after the accepted step
  double step_size = 0.0;
  double max_mean_change = 0.0;
  int line_search_trials = 0;
};

struct InnerSolveResult {
  BeliefTrajectory trajectory;
  std::vector<AffineFeedbackPolicy> policies;  // feedforward zero around `trajectory`
  double initial_merit = 0.0;
  std::vector<InnerIterationRecord> iterations;
  bool converged = false;
  bool line_search_failed = false;
};

// Iterates linearize -> quadraticize -> solve LQ game -> line-searched rollout
// until the nominal means move less than the inner tolerance. Constraint
// linearizations are held fixed.
InnerSolveResult inner_solve(const GameSpec& spec, const BeliefTrajectory& nominal,
                             std::span<const LinearizedConstraint> constraints,
                             const MultiplierState& multipliers, const SolverConfig& config);

struct OuterIterationRecord {
  int iteration = 0;
  double max_surrogate_violation = 0.0;
  double max_probability_violation = 0.0;
  std::vector<double> player_costs;
  int inner_iterations = 0;
  bool inner_converged = false;
  bool line_search_failed = false;
  double max_lambda = 0.0;
  double max_mu = 0.0;
  std::vector<InnerIterationRecord> inner;
};

struct SolverDiagnostics {
  std::vector<OuterIterationRecord> outer;
  bool converged = false;
  double final_violation = 0.0;
  int regularized_filter_updates = 0;
  double wall_time_seconds = 0.0;  // not part of deterministic outputs
};

struct Solution {
  PenaltyMode mode = PenaltyMode::kAugmentedLagrangian;
  BeliefTrajectory trajectory;
  std::vector<AffineFeedbackPolicy> policies;
  std::optional<MultiplierState> multipliers;  // absent in fixed-penalty mode
  std::vector<LinearizedConstraint> constraints;
  std::vector<double> surrogate_values;
  LQGame final_game;  // LQ approximation at the final nominal
  SolverDiagnostics diagnostics;
};

// Augmented-Lagrangian outer loop around inner_solve. Multipliers are updated
// from the second round on, so the first inner solve runs at lambda = 0, mu = mu_0.
// In fixed-penalty mode lambda stays 0 and mu stays at the fixed weight; the
// loop stops once a round leaves the nominal unchanged.
Solution outer_solve(const GameSpec& spec, const std::vector<ControlSet>& initial_controls,
                     const SolverConfig& config);

// Zero initial controls.
Solution outer_solve(const GameSpec& spec, const SolverConfig& config);

struct ConvergenceReport {
  std::string mode;
  bool converged = false;
  double final_violation = 0.0;
  std::vector<double> max_violation_per_outer;
  std::vector<double> max_probability_violation_per_outer;
  std::vector<std::vector<double>> player_costs_per_outer;
  std::vector<int> inner_iterations_per_outer;
  std::optional<std::vector<double>> max_lambda_per_outer;  // AL mode only
  std::optional<std::vector<double>> max_mu_per_outer;
  double wall_time_seconds = 0.0;
};

ConvergenceReport convergence_report(const Solution& solution);

}  // namespace chance_games
