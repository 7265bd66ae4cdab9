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

#include <vector>

#include "ncirl/game.hpp"

namespace ncirl {

using Matrix = std::vector<std::vector<double>>;

/// Row player maximizes.
struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
};

/// Value and optimal mixed strategies of a finite zero-sum matrix game.
///
/// Among optimal strategies, each player's reported one maximizes their payoff
/// against a uniformly mixing opponent, so the result does not depend on
/// simplex pivoting ties and never puts weight on a weakly dominated row or
/// column when an undominated optimum exists.
MatrixGameSolution solve_matrix_game(const Matrix& payoff);

struct ShapleyOptions {
  double tol = 1e-10;
  int max_iterations = 100000;
};

/// Complete-information values and stationary (or stage-indexed) policies.
/// Finite horizon: `values[t][s]` is the value-to-go from stage t, and
/// `values[H]` is the zero terminal row. Discounted: a single stage row.
struct ShapleyResult {
  std::vector<std::vector<double>> values;
  std::vector<std::vector<std::vector<double>>> attacker_policy;  // [t][s][a]
  std::vector<std::vector<std::vector<double>>> defender_policy;  // [t][s][d]
  std::vector<double> sweep_deltas;
};

ShapleyResult shapley_solve(const CompleteInfoGame& game,
                            const ShapleyOptions& options = {});

/// Stage matrix Q(s,.,.) = r + gamma * E[next_value].
Matrix shapley_stage_matrix(const CompleteInfoGame& game, int s,
                            const std::vector<double>& next_value);

}  // namespace ncirl
