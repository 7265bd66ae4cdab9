// Copyright 2026 The ncirl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ncirl/dual.hpp"
#include "ncirl/environments.hpp"
#include "ncirl/lp.hpp"
#include "ncirl/matrix_game.hpp"
#include "ncirl/benchmark.hpp"
#include "ncirl/ncpbvi.hpp"
#include "ncirl/primal.hpp"

namespace {

ncirl::Matrix random_matrix(int rows, int cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ncirl::Matrix m(rows, std::vector<double>(cols));
  for (auto& row : m)
    for (auto& x : row) x = u(rng);
  return m;
}

int first_active_state(const ncirl::PrimalValueSet& sets) {
  for (int s = 0; s < sets.num_states(); ++s)
    if (sets.is_active(0, s)) return s;
  return 0;
}

ncirl::SolverConfig small_config() {
  ncirl::SolverConfig c;
  c.expansions = 3;
  c.sweeps = 20;
  c.expand.insert.cap = 30;
  c.expand.max_per_point = 2;
  return c;
}

// Square zero-sum matrix game; exercises the dense simplex end to end.
void BM_MatrixGame(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto m = random_matrix(n, n, 17);
  for (auto _ : state) benchmark::DoNotOptimize(ncirl::solve_matrix_game(m).value);
}
BENCHMARK(BM_MatrixGame)->Arg(4)->Arg(16)->Arg(48);

// Random dense inequality LP: max sum x subject to A x <= 1, A >= 0.
void BM_LpSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  ncirl::lp::LpProblem p(ncirl::lp::Sense::kMaximize);
  for (int j = 0; j < n; ++j) p.set_objective(p.add_variable(), 1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<ncirl::lp::Term> row;
    for (int j = 0; j < n; ++j) row.push_back({j, u(rng)});
    p.add_constraint(std::move(row), ncirl::lp::Relation::kLessEqual, 1.0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(ncirl::lp::solve_lp(p).objective_value);
}
BENCHMARK(BM_LpSolve)->Arg(8)->Arg(32)->Arg(96);

// One attacker and one defender backup against solved patrolling value sets.
void BM_PatrollingBackups(benchmark::State& state) {
  const auto game = ncirl::patrolling_game();
  const auto solved = ncirl::run_ncpbvi(game, small_config());
  const int s = first_active_state(solved.primal);
  const std::vector<double> b{0.5, 0.5};
  const std::vector<double> zeta{0.0, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ncirl::solve_pa(game, solved.primal, 0, s, b).value);
    benchmark::DoNotOptimize(ncirl::solve_pd(game, solved.dual, 0, s, zeta).value);
  }
}
BENCHMARK(BM_PatrollingBackups);

void BM_SolvePatrolling(benchmark::State& state) {
  const auto game = ncirl::patrolling_game();
  for (auto _ : state) benchmark::DoNotOptimize(ncirl::run_ncpbvi(game, small_config()).lower_bound);
}
BENCHMARK(BM_SolvePatrolling)->Unit(benchmark::kMillisecond);

// Full solve of a generated attack graph under the benchmark defaults.
void BM_SolveAttackGraph(benchmark::State& state) {
  ncirl::GraphGenParams gp;
  gp.nodes = static_cast<int>(state.range(0));
  gp.seed = 3;
  const auto game = ncirl::compile_attack_game(ncirl::generate_attack_graph(gp));
  state.counters["states"] = game.num_states();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ncirl::run_ncpbvi(game, ncirl::benchmark_solver_defaults()).lower_bound);
  }
}
BENCHMARK(BM_SolveAttackGraph)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
