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

/// Sawtooth upper bound: max over points with negative excess of
/// c.zeta + psi_j * (w_j - c.zeta_j), psi_j = min over zeta_j(theta) > 0 of
/// zeta(theta) / zeta_j(theta). Falls back to c.zeta. Homogeneous in zeta.
double sawtooth_d(std::span<const double> corner_values,
                  const std::vector<ValuePoint>& points,
                  std::span<const double> zeta);

/// Continuation after observing attacker action `action` and successor
/// `next`. `mass` = sum_d D(d) T(next|s,action,d); `lambda` and `value` are
/// mass-weighted. `zeta_next` = lambda / mass, or zero when the mass vanishes
/// (then `degenerate` is set).
struct DualContinuation {
  int action = 0;
  int next = 0;
  double mass = 0.0;
  std::vector<double> lambda;
  double value = 0.0;
  std::vector<double> zeta_next;
  bool degenerate = false;
};

struct DualBackupResult {
  double value = 0.0;
  std::vector<double> defender;  // D_s(d)
  std::vector<DualContinuation> continuations;
};

struct PdLayout {
  int value = -1;
  std::vector<int> defender;
  struct Cont {
    int action;
    int next;
    std::vector<int> weights;            // hull: anchor first, then points
    std::vector<const ValuePoint*> points;
    double anchor = 0.0;
    int w = -1;                          // sawtooth only
    std::vector<int> lambda;             // sawtooth only
  };
  std::vector<Cont> conts;
};

/// Assembles the defender backup LP at stage t, state s, parameter zeta.
lp::LpProblem build_pd(const GameSpec& spec, const DualValueSet& sets, int t,
                       int s, std::span<const double> zeta,
                       const BackupOptions& options = {},
                       PdLayout* layout = nullptr);

/// Throws InfeasibleBackup when the LP is not optimal.
DualBackupResult solve_pd(const GameSpec& spec, const DualValueSet& sets,
                          int t, int s, std::span<const double> zeta,
                          const BackupOptions& options = {});

SweepStats update_d(const GameSpec& spec, DualValueSet& sets,
                    const BackupOptions& options = {});

/// Inserts the continuation parameters of every stored point's solve into the
/// successor sets, most novel first, at most `max_per_point` per point.
int expand_d(const GameSpec& spec, DualValueSet& sets,
             const BackupOptions& options = {},
             const ExpandOptions& expand = {});

/// Anchors at the reward bound; empty point sets.
DualValueSet initial_dual_sets(const GameSpec& spec);

/// Inserts zeta = max(y) - y for every primal point with belief gradient y,
/// the parameter at which that belief is the dual maximizer.
int seed_dual_from_primal(const GameSpec& spec, const PrimalValueSet& primal,
                          DualValueSet& dual, const BackupOptions& options = {},
                          const InsertPolicy& insert = {});

}  // namespace ncirl
