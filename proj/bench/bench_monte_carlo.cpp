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


// Serial versus OpenMP Monte Carlo evaluation of a solved scenario.

#include "chance_games/monte_carlo.hpp"
#include "chance_games/scenarios.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <string>

namespace cg = chance_games;

namespace {

struct Solved {
  cg::LoadedScenario loaded;
  cg::Solution solution;
};

const Solved& solved(const std::string& name) {
  static std::map<std::string, Solved> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    Solved s{cg::load_scenario(cg::builtin_scenario(name)), {}};
    s.solution = cg::outer_solve(s.loaded.spec, s.loaded.solver);
    it = cache.emplace(name, std::move(s)).first;
  }
  return it->second;
}

const char* scenario_name(int64_t index) {
  static const char* names[] = {"merge", "intersection", "roundabout"};
  return names[index];
}

void BM_TrialsSerial(benchmark::State& state) {
  const Solved& s = solved(scenario_name(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cg::run_trials_serial(s.solution, s.loaded.spec, n, 1));
  }
  state.SetItemsProcessed(state.iterations() * n);
  state.SetLabel(scenario_name(state.range(0)));
}

void BM_TrialsParallel(benchmark::State& state) {
  const Solved& s = solved(scenario_name(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cg::run_trials(s.solution, s.loaded.spec, n, 1));
  }
  state.SetItemsProcessed(state.iterations() * n);
  state.SetLabel(scenario_name(state.range(0)));
}

void BM_Solve(benchmark::State& state) {
  const auto loaded = cg::load_scenario(cg::builtin_scenario(scenario_name(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cg::outer_solve(loaded.spec, loaded.solver));
  }
  state.SetLabel(scenario_name(state.range(0)));
}

}  // namespace

BENCHMARK(BM_TrialsSerial)->ArgsProduct({{0, 1, 2}, {100, 1000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->ArgsProduct({{0, 1, 2}, {100, 1000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
