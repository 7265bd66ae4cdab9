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

#include <span>
#include <vector>

#include "ncirl/backup.hpp"
#include "ncirl/game.hpp"
#include "ncirl/lp.hpp"
#include "ncirl/value_sets.hpp"

namespace ncirl {

/// Sawtooth lower bound: min over interior points with positive excess of
/// c.b + phi_j * (v_j - c.b_j), where phi_j = min over b_j(theta) > 0 of
/// b(theta) / b_j(theta). Falls back to c.b. Homogeneous of degree one in b.
double sawtooth_a(std::span<const double> corner_values,
                  const std::vector<ValuePoint>& points,
                  std::span<const double> b);

/// Continuation after attacker action `action` and successor `next`.
/// `mass` is the unnormalized posterior A(theta, action); `value` bounds the
/// mass-weighted continuation value.
struct PrimalContinuation {
  int action = 0;
  int next = 0;
  std::vector<double> mass;
  double value = 0.0;
};

struct PrimalBackupResult {
  double value = 0.0;
  std::vector<std::vector<double>> joint;     // [theta][a], rows sum to b(theta)
  std::vector<std::vector<double>> strategy;  // [theta][a], conditional on theta
  std::vector<PrimalContinuation> continuations;
  std::vector<double> belief_gradient;        // dV/db(theta)
};

/// Variable indices of an assembled P_A, for solution extraction.
struct PaLayout {
  int value = -1;
  std::vector<std::vector<int>> joint;  // [theta][a]
  struct Cont {
    int action;
    int next;
    int var;
  };
  std::vector<Cont> conts;
  std::vector<int> consistency_rows;    // [theta]
};

/// Assembles the attacker backup LP at stage t, state s, belief b.
lp::LpProblem build_pa(const GameSpec& spec, const PrimalValueSet& sets, int t,
                       int s, std::span<const double> b,
                       const BackupOptions& options = {},
                       PaLayout* layout = nullptr);

/// Throws InfeasibleBackup when the LP is not optimal.
PrimalBackupResult solve_pa(const GameSpec& spec, const PrimalValueSet& sets,
                            int t, int s, std::span<const double> b,
                            const BackupOptions& options = {});

/// Re-solves every stored point at every active (stage, state). Finite
/// horizon: one backward pass. Discounted: one Jacobi sweep.
SweepStats update_a(const GameSpec& spec, PrimalValueSet& sets,
                    const BackupOptions& options = {});

/// For every interior point, inserts the most informative one-step posterior
/// into the successor sets. Returns the number of insertions.
int expand_a(const GameSpec& spec, PrimalValueSet& sets,
             const BackupOptions& options = {},
             const ExpandOptions& expand = {});

/// Corner values from per-intent Shapley iteration; empty interior sets.
PrimalValueSet initial_primal_sets(const GameSpec& spec);

}  // namespace ncirl
