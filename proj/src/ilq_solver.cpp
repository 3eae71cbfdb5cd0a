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

#include "chance_games/ilq_solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace chance_games {

std::string to_string(PenaltyMode mode) {
  return mode == PenaltyMode::kAugmentedLagrangian ? "augmented-lagrangian" : "fixed-penalty";
}

PenaltyMode penalty_mode_from_string(const std::string& name) {
  if (name == "augmented-lagrangian" || name == "al") return PenaltyMode::kAugmentedLagrangian;
  if (name == "fixed-penalty") return PenaltyMode::kFixedPenalty;
  throw InvalidInputError("unknown solver mode '" + name +
                          "' (expected augmented-lagrangian or fixed-penalty)");
}

void SolverConfig::validate() const {
  if (!(inner_tolerance > 0.0)) throw ValidationError("inner_tolerance", "must be positive");
  if (!(outer_tolerance > 0.0)) throw ValidationError("outer_tolerance", "must be positive");
  if (inner_max_iterations < 1) throw ValidationError("inner_max_iterations", "must be >= 1");
  if (outer_max_iterations < 1) throw ValidationError("outer_max_iterations", "must be >= 1");
  if (!(line_search_factor > 0.0 && line_search_factor < 1.0)) {
    throw ValidationError("line_search_factor", "must lie in (0, 1)");
  }
  if (line_search_max_trials < 1) throw ValidationError("line_search_max_trials", "must be >= 1");
  if (!(initial_penalty > 0.0)) throw ValidationError("initial_penalty", "must be positive");
  if (!(penalty_growth > 1.0)) throw ValidationError("penalty_growth", "must exceed 1");
  if (!(penalty_cap >= initial_penalty)) {
    throw ValidationError("penalty_cap", "must be >= initial_penalty");
  }
  if (!(fixed_penalty_weight > 0.0)) {
    throw ValidationError("fixed_penalty_weight", "must be positive");
  }
}

namespace {

// Clamps eigenvalues at `floor` when the smallest one is below `trigger`.
MatrixXd project_if_needed(const MatrixXd& m, double trigger, double floor) {
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(m));
  if (es.eigenvalues().minCoeff() >= trigger) return m;
  const VectorXd clamped = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
}

void check_alignment(std::span<const LinearizedConstraint> constraints, std::size_t n,
                     const char* what) {
  require_size(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(constraints.size()),
               what);
}

}  // namespace

std::vector<double> surrogate_values(std::span<const LinearizedConstraint> constraints,
                                     const BeliefTrajectory& trajectory) {
  std::vector<double> c;
  c.reserve(constraints.size());
  for (const auto& lc : constraints) c.push_back(surrogate_value(lc, trajectory.means[lc.timestep]));
  return c;
}

std::vector<double> penalty_gates(std::span<const LinearizedConstraint> constraints,
                                  const MultiplierState& multipliers,
                                  const BeliefTrajectory& trajectory) {
  check_alignment(constraints, multipliers.size(), "multiplier state");
  const auto c = surrogate_values(constraints, trajectory);
  std::vector<double> gates(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) {
    gates[s] = penalty_gate(c[s], multipliers.lambda[s], multipliers.mu[s]);
  }
  return gates;
}

CostApproximation quadraticize_costs(const GameSpec& spec, const BeliefTrajectory& nominal,
                                     std::span<const LinearizedConstraint> constraints,
                                     std::span<const double> lambda,
                                     std::span<const double> gates) {
  check_alignment(constraints, lambda.size(), "multipliers");
  check_alignment(constraints, gates.size(), "gates");
  const int N = spec.num_players();
  const int L = spec.horizon;
  require_size(static_cast<Eigen::Index>(nominal.means.size()), L + 1, "nominal means");
  require_size(static_cast<Eigen::Index>(nominal.covariances.size()), L + 1,
               "nominal covariances");

  // AL increments per timestep, shared by all players.
  std::vector<AlQuadraticTerms> shared(L + 1);
  const Eigen::Index n = spec.state_dim();
  for (auto& t : shared) {
    t.Q = MatrixXd::Zero(n, n);
    t.l = VectorXd::Zero(n);
  }
  std::vector<bool> touched(L + 1, false);
  for (std::size_t s = 0; s < constraints.size(); ++s) {
    const auto& lc = constraints[s];
    if (lambda[s] == 0.0 && gates[s] == 0.0) continue;
    const int k = lc.timestep;
    const auto terms = recenter(
        al_quadratic_terms(lc, lambda[s], gates[s], nominal.covariances[k]), nominal.means[k]);
    shared[k].Q += terms.Q;
    shared[k].l += terms.l;
    shared[k].constant += terms.constant;
    touched[k] = true;
  }

  auto finish_state_terms = [&](MatrixXd Q, VectorXd l, double constant, int k,
                                MatrixXd& Q_out, VectorXd& l_out, double& c_out) {
    if (touched[k]) {
      Q += shared[k].Q;
      l += shared[k].l;
      constant += shared[k].constant;
    }
    Q_out = project_if_needed(Q, 0.0, 1e-6);
    l_out = std::move(l);
    c_out = constant;
  };

  CostApproximation approx;
  approx.stages.resize(L);
  for (int k = 0; k < L; ++k) {
    approx.stages[k].resize(N);
    for (int i = 0; i < N; ++i) {
      CostExpansion e = spec.costs[i]->expand_running(k, nominal.means[k], nominal.controls[k]);
      auto& pq = approx.stages[k][i];
      finish_state_terms(std::move(e.Q), std::move(e.l), e.value, k, pq.Q, pq.l, pq.constant);
      pq.R = std::move(e.R);
      pq.r = std::move(e.r);
      pq.R[i] = project_if_needed(pq.R[i], 1e-6, 1e-6);
    }
  }
  approx.terminal.resize(N);
  for (int i = 0; i < N; ++i) {
    CostExpansion e = spec.costs[i]->expand_terminal(nominal.means[L]);
    auto& tq = approx.terminal[i];
    finish_state_terms(std::move(e.Q), std::move(e.l), e.value, L, tq.Q, tq.l, tq.constant);
  }
  return approx;
}

LQGame assemble_lq_game(const GameSpec& spec, const BeliefTrajectory& nominal,
                        CostApproximation costs) {
  LQGame game;
  game.stages.resize(spec.horizon);
  for (int k = 0; k < spec.horizon; ++k) {
    auto lin = linearize_dynamics(spec, nominal.means[k], nominal.controls[k]);
    game.stages[k].A = std::move(lin.A);
    game.stages[k].B = std::move(lin.B);
    game.stages[k].players = std::move(costs.stages[k]);
  }
  game.terminal = std::move(costs.terminal);
  return game;
}

LQGame build_lq_game(const GameSpec& spec, const BeliefTrajectory& nominal,
                     std::span<const LinearizedConstraint> constraints,
                     const MultiplierState& multipliers) {
  const auto gates = penalty_gates(constraints, multipliers, nominal);
  return assemble_lq_game(
      spec, nominal, quadraticize_costs(spec, nominal, constraints, multipliers.lambda, gates));
}

std::vector<double> player_costs(const GameSpec& spec, const BeliefTrajectory& trajectory) {
  const int N = spec.num_players();
  std::vector<double> costs(N, 0.0);
  for (int i = 0; i < N; ++i) {
    for (int k = 0; k < spec.horizon; ++k) {
      costs[i] += spec.costs[i]->running(k, trajectory.means[k], trajectory.controls[k]);
    }
    costs[i] += spec.costs[i]->terminal(trajectory.means[spec.horizon]);
  }
  return costs;
}

double augmented_merit(const GameSpec& spec, const BeliefTrajectory& trajectory,
                       std::span<const LinearizedConstraint> constraints,
                       const MultiplierState& multipliers) {
  check_alignment(constraints, multipliers.size(), "multiplier state");
  double total = 0.0;
  for (double c : player_costs(spec, trajectory)) total += c;
  double al = 0.0;
  const auto c = surrogate_values(constraints, trajectory);
  for (std::size_t s = 0; s < c.size(); ++s) {
    const double gate = penalty_gate(c[s], multipliers.lambda[s], multipliers.mu[s]);
    al += multipliers.lambda[s] * c[s] + 0.5 * gate * c[s] * c[s];
  }
  return total + spec.num_players() * al;
}

namespace {

double max_mean_change(const BeliefTrajectory& a, const BeliefTrajectory& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.means.size(); ++k) {
    worst = std::max(worst, (a.means[k] - b.means[k]).norm());
  }
  return worst;
}

std::vector<AffineFeedbackPolicy> feedback_only(std::vector<AffineFeedbackPolicy> policies) {
  for (auto& p : policies) {
    for (auto& a : p.feedforwards) a.setZero();
  }
  return policies;
}

}  // namespace

InnerSolveResult inner_solve(const GameSpec& spec, const BeliefTrajectory& nominal,
                             std::span<const LinearizedConstraint> constraints,
                             const MultiplierState& multipliers, const SolverConfig& config) {
  InnerSolveResult result;
  result.trajectory = nominal;
  if (result.trajectory.covariances.size() != nominal.means.size()) {
    result.trajectory.covariances = precompute_covariances(spec, result.trajectory);
  }
  double merit = augmented_merit(spec, result.trajectory, constraints, multipliers);
  result.initial_merit = merit;

  for (int it = 0; it < config.inner_max_iterations; ++it) {
    const LQGame game = build_lq_game(spec, result.trajectory, constraints, multipliers);
    const LQGameSolution lq = solve_lq_game(game);
    result.policies = feedback_only(lq.policies);

    double eta = 1.0;
    bool accepted = false;
    BeliefTrajectory candidate;
    double candidate_merit = 0.0;
    int trials = 0;
    for (; trials < config.line_search_max_trials; ++trials) {
      candidate = rollout_zero_noise(spec, result.trajectory, lq.policies, eta, false);
      candidate_merit = augmented_merit(spec, candidate, constraints, multipliers);
      if (candidate_merit <= merit) {
        accepted = true;
        break;
      }
      eta *= config.line_search_factor;
    }
    if (!accepted) {
      result.line_search_failed = true;
      break;
    }
    const double change = max_mean_change(candidate, result.trajectory);
    candidate.covariances = precompute_covariances(spec, candidate);
    result.trajectory = std::move(candidate);
    merit = candidate_merit;
    result.iterations.push_back({merit, eta, change, trials + 1});
    if (change < config.inner_tolerance) {
      result.converged = true;
      break;
    }
  }
  if (result.policies.empty()) {
    for (int i = 0; i < spec.num_players(); ++i) {
      result.policies.push_back(AffineFeedbackPolicy::zero(
          spec.horizon, spec.dynamics->control_dim(i), spec.state_dim()));
    }
  }
  return result;
}

Solution outer_solve(const GameSpec& spec, const std::vector<ControlSet>& initial_controls,
                     const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  spec.validate();
  config.validate();

  const bool al_mode = config.mode == PenaltyMode::kAugmentedLagrangian;
  MultiplierState multipliers = MultiplierState::initial(
      spec.constraint_slots(), al_mode ? config.initial_penalty : config.fixed_penalty_weight,
      config.penalty_growth, std::max(config.penalty_cap, config.fixed_penalty_weight));

  Solution sol;
  sol.mode = config.mode;
  BeliefTrajectory trajectory = rollout_controls(spec, initial_controls);
  auto constraints = linearize_chance_constraints(spec, trajectory);
  auto c = surrogate_values(constraints, trajectory);
  std::vector<AffineFeedbackPolicy> policies;

  for (int outer = 0; outer < config.outer_max_iterations; ++outer) {
    if (outer > 0 && al_mode) multipliers = update_multipliers(multipliers, c);

    InnerSolveResult inner = inner_solve(spec, trajectory, constraints, multipliers, config);
    const double moved = max_mean_change(inner.trajectory, trajectory);
    trajectory = std::move(inner.trajectory);
    policies = std::move(inner.policies);

    constraints = linearize_chance_constraints(spec, trajectory);
    c = surrogate_values(constraints, trajectory);

    OuterIterationRecord rec;
    rec.iteration = outer;
    rec.max_surrogate_violation = max_surrogate_violation(c);
    for (const auto& lc : constraints) {
      rec.max_probability_violation = std::max(
          rec.max_probability_violation,
          chance_violation_probability(lc, trajectory.means[lc.timestep],
                                       trajectory.covariances[lc.timestep],
                                       spec.constraints[lc.index].probability));
    }
    rec.player_costs = player_costs(spec, trajectory);
    rec.inner_iterations = static_cast<int>(inner.iterations.size());
    rec.inner_converged = inner.converged;
    rec.line_search_failed = inner.line_search_failed;
    for (std::size_t s = 0; s < multipliers.size(); ++s) {
      rec.max_lambda = std::max(rec.max_lambda, multipliers.lambda[s]);
      rec.max_mu = std::max(rec.max_mu, multipliers.mu[s]);
    }
    rec.inner = std::move(inner.iterations);
    sol.diagnostics.outer.push_back(std::move(rec));

    if (max_surrogate_violation(c) <= config.outer_tolerance) {
      sol.diagnostics.converged = true;
      break;
    }
    if (!al_mode && moved < config.inner_tolerance) break;
  }

  // Feedback gains re-derived at the final nominal; the feedforward is zero so
  // the zero-noise closed loop reproduces the nominal exactly.
  sol.final_game = build_lq_game(spec, trajectory, constraints, multipliers);
  try {
    sol.policies = feedback_only(solve_lq_game(sol.final_game).policies);
  } catch (const EquilibriumDegeneracyError&) {
    sol.policies = std::move(policies);
  }
  sol.diagnostics.final_violation = max_surrogate_violation(c);
  sol.diagnostics.regularized_filter_updates =
      build_filter_schedule(spec, trajectory).regularized_updates;
  sol.trajectory = std::move(trajectory);
  sol.constraints = std::move(constraints);
  sol.surrogate_values = std::move(c);
  if (al_mode) sol.multipliers = std::move(multipliers);
  sol.diagnostics.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

Solution outer_solve(const GameSpec& spec, const SolverConfig& config) {
  std::vector<ControlSet> zeros(spec.horizon, spec.dynamics->zero_controls());
  return outer_solve(spec, zeros, config);
}

ConvergenceReport convergence_report(const Solution& solution) {
  ConvergenceReport r;
  r.mode = to_string(solution.mode);
  r.converged = solution.diagnostics.converged;
  r.final_violation = solution.diagnostics.final_violation;
  r.wall_time_seconds = solution.diagnostics.wall_time_seconds;
  const bool al = solution.multipliers.has_value();
  if (al) {
    r.max_lambda_per_outer.emplace();
    r.max_mu_per_outer.emplace();
  }
  for (const auto& rec : solution.diagnostics.outer) {
    r.max_violation_per_outer.push_back(rec.max_surrogate_violation);
    r.max_probability_violation_per_outer.push_back(rec.max_probability_violation);
    r.player_costs_per_outer.push_back(rec.player_costs);
    r.inner_iterations_per_outer.push_back(rec.inner_iterations);
    if (al) {
      r.max_lambda_per_outer->push_back(rec.max_lambda);
      r.max_mu_per_outer->push_back(rec.max_mu);
    }
  }
  return r;
}

}  // namespace chance_games
