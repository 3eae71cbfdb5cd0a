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

#include "chance_games/monte_carlo.hpp"

#include "chance_games/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chance_games {

ClosedLoopContext make_closed_loop_context(const Solution& solution, const GameSpec& spec) {
  require_size(solution.trajectory.horizon(), spec.horizon, "solution horizon");
  require_size(static_cast<Eigen::Index>(solution.policies.size()), spec.num_players(),
               "solution policies");
  ClosedLoopContext ctx;
  ctx.spec = &spec;
  ctx.solution = &solution;
  ctx.filter = build_filter_schedule(spec, solution.trajectory);
  ctx.initial_root = covariance_square_root(spec.initial_belief.covariance);
  ctx.process_root = covariance_square_root(spec.noise.process);
  ctx.measurement_root = covariance_square_root(spec.noise.measurement);
  return ctx;
}

TrialResult simulate_closed_loop(const ClosedLoopContext& ctx, std::uint64_t seed) {
  const GameSpec& spec = *ctx.spec;
  const BeliefTrajectory& nominal = ctx.solution->trajectory;
  const auto& policies = ctx.solution->policies;
  const int L = spec.horizon;
  const int N = spec.num_players();
  const CounterNormal rng(seed);

  TrialResult trial;
  trial.seed = seed;
  trial.costs.assign(N, 0.0);
  trial.max_violation = -std::numeric_limits<double>::infinity();

  VectorXd estimate = spec.initial_belief.mean;
  VectorXd state = estimate + ctx.initial_root * rng.vector(0, NoiseChannel::kInitialState,
                                                            ctx.initial_root.cols());
  trial.states.push_back(state);
  trial.estimates.push_back(estimate);

  auto record_violations = [&](int k, const VectorXd& x) {
    for (const auto& cc : spec.constraints) {
      if (!cc.active_at(k, L)) continue;
      trial.max_violation = std::max(trial.max_violation, cc.constraint->value(x));
    }
  };
  record_violations(0, state);

  for (int k = 0; k < L; ++k) {
    ControlSet u(N);
    for (int i = 0; i < N; ++i) {
      u[i] = apply_policy(policies[i], k, estimate, nominal.means[k], nominal.controls[k][i]);
    }
    for (int i = 0; i < N; ++i) trial.costs[i] += spec.costs[i]->running(k, state, u);

    const VectorXd w = ctx.process_root * rng.vector(k, NoiseChannel::kProcess,
                                                     ctx.process_root.cols());
    state = spec.dynamics->step(state, u, w);
    const VectorXd v = ctx.measurement_root * rng.vector(k + 1, NoiseChannel::kMeasurement,
                                                         ctx.measurement_root.cols());
    const VectorXd y = spec.measurement->measure(state, v);

    const auto& lin = ctx.filter.dynamics[k];
    VectorXd prior = nominal.means[k + 1] + lin.A * (estimate - nominal.means[k]);
    for (int j = 0; j < N; ++j) prior += lin.B[j] * (u[j] - nominal.controls[k][j]);
    const VectorXd predicted = ctx.filter.nominal_measurements[k] +
                               ctx.filter.measurements[k].H * (prior - nominal.means[k + 1]);
    estimate = prior + ctx.filter.gains[k] * (y - predicted);

    trial.controls.push_back(std::move(u));
    trial.states.push_back(state);
    trial.estimates.push_back(estimate);
    record_violations(k + 1, state);
  }
  for (int i = 0; i < N; ++i) trial.costs[i] += spec.costs[i]->terminal(state);
  if (!std::isfinite(trial.max_violation)) trial.max_violation = 0.0;  // no active constraint
  trial.satisfied = trial.max_violation <= 0.0;
  return trial;
}

TrialResult simulate_closed_loop(const Solution& solution, const GameSpec& spec,
                                 std::uint64_t seed) {
  return simulate_closed_loop(make_closed_loop_context(solution, spec), seed);
}

Histogram make_histogram(const std::vector<double>& values, int bins) {
  if (bins < 1) throw InvalidInputError("histogram needs at least one bin");
  double lo = 0.0;
  double hi = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= lo) hi = lo + 1.0;
  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + width * b;
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    int b = static_cast<int>(std::floor((v - lo) / width));
    h.counts[std::clamp(b, 0, bins - 1)] += 1;
  }
  return h;
}

MonteCarloReport summarize_trials(const std::vector<TrialResult>& trials, int bins) {
  MonteCarloReport r;
  r.trials = static_cast<int>(trials.size());
  if (trials.empty()) return r;
  const std::size_t N = trials.front().costs.size();
  r.cost_mean.assign(N, 0.0);
  r.cost_stddev.assign(N, 0.0);
  for (const auto& t : trials) {
    r.seeds.push_back(t.seed);
    r.max_violations.push_back(t.max_violation);
    r.satisfied.push_back(t.satisfied);
    if (t.satisfied) ++r.satisfied_count;
    for (std::size_t i = 0; i < N; ++i) r.cost_mean[i] += t.costs[i];
  }
  for (double& m : r.cost_mean) m /= r.trials;
  if (r.trials > 1) {
    for (const auto& t : trials) {
      for (std::size_t i = 0; i < N; ++i) {
        const double d = t.costs[i] - r.cost_mean[i];
        r.cost_stddev[i] += d * d;
      }
    }
    for (double& s : r.cost_stddev) s = std::sqrt(s / (r.trials - 1));
  }
  r.satisfaction_rate = static_cast<double>(r.satisfied_count) / r.trials;
  r.violation_histogram = make_histogram(r.max_violations, bins);
  return r;
}

MonteCarloReport run_trials(const Solution& solution, const GameSpec& spec, int n,
                            std::uint64_t base_seed) {
  if (n < 1) throw InvalidInputError("trial count must be >= 1");
  const ClosedLoopContext ctx = make_closed_loop_context(solution, spec);
  std::vector<TrialResult> trials(n);
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < n; ++t) {
    trials[t] = simulate_closed_loop(ctx, base_seed + static_cast<std::uint64_t>(t));
  }
  return summarize_trials(trials);
}

MonteCarloReport run_trials_serial(const Solution& solution, const GameSpec& spec, int n,
                                   std::uint64_t base_seed) {
  if (n < 1) throw InvalidInputError("trial count must be >= 1");
  const ClosedLoopContext ctx = make_closed_loop_context(solution, spec);
  std::vector<TrialResult> trials;
  trials.reserve(n);
  for (int t = 0; t < n; ++t) {
    trials.push_back(simulate_closed_loop(ctx, base_seed + static_cast<std::uint64_t>(t)));
  }
  return summarize_trials(trials);
}

}  // namespace chance_games
