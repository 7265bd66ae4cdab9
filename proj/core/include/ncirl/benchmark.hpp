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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncirl/environments.hpp"
#include "ncirl/ncpbvi.hpp"

namespace ncirl {

enum class BenchEnvironment { kAttackGraph, kPatrolling };
enum class Evaluation { kMonteCarlo, kExpected };

/// Small rounds and a tight dual cap so that twenty n = 6 instances fit in a
/// few minutes on one core.
SolverConfig benchmark_solver_defaults();

struct BenchConfig {
  BenchEnvironment environment = BenchEnvironment::kAttackGraph;
  std::vector<int> sizes{6};
  int seeds = 20;
  std::uint64_t base_seed = 0;
  int horizon = 0;  // 0 = graph size (attack graphs) or the game's own horizon
  int rollouts = 100;
  Evaluation evaluation = Evaluation::kMonteCarlo;
  SolverConfig solver = benchmark_solver_defaults();
  GraphGenParams graph;  // nodes and seed are set per instance
  CompileOptions compile;
  std::optional<int> fixed_true_theta;
  std::optional<int> fixed_inferred_theta;
  int jobs = 1;
};

/// Parses and validates; throws ConfigError.
BenchConfig bench_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BenchConfig& config);

struct BenchRow {
  int size = 0;
  int seed = 0;
  std::uint64_t instance_seed = 0;
  std::string method;  // "ncirl" or "mairl"
  int true_theta = 0;
  int inferred_theta = -1;
  int states = 0;
  double reward = 0.0;  // normalized accumulated attacker reward
  double lower_bound = 0.0;
  double upper_bound = 0.0;
};

struct MethodStats {
  double mean = 0.0;
  double stderr_ = 0.0;
  int count = 0;
};

struct SizeSummary {
  int size = 0;
  MethodStats ncirl;
  MethodStats mairl;
  double relative_reduction = 0.0;  // (MA-IRL - N-CIRL) / MA-IRL
  int failures = 0;
  double mean_solve_seconds = 0.0;
};

struct BenchmarkResult {
  std::vector<BenchRow> rows;  // ordered by size, seed, method
  std::vector<SizeSummary> summary;
  std::vector<std::string> failures;
  double total_seconds = 0.0;
};

BenchmarkResult run_benchmark(const BenchConfig& config);

/// Long-format table, one row per instance x method x seed. Contains no
/// timing data, so identical configs produce identical bytes.
std::string to_csv(const BenchmarkResult& result);
nlohmann::json summary_json(const BenchmarkResult& result, const BenchConfig& config);

}  // namespace ncirl
