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
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncirl/backup.hpp"
#include "ncirl/errors.hpp"
#include "ncirl/game.hpp"
#include "ncirl/value_sets.hpp"

namespace ncirl {

struct SolverConfig {
  int expansions = 10;       // N
  int sweeps = 20;           // T, per round and side
  double sweep_tol = 1e-7;   // a round's sweeps stop once the delta drops below
  BackupOptions backup;
  ExpandOptions expand;
  bool seed_dual = true;     // conjugate starting points from the primal side
  std::optional<std::vector<double>> initial_belief;  // overrides the prior
};

nlohmann::json to_json(const SolverConfig& config);
/// Keys absent from `j` keep their value in `base`.
SolverConfig solver_config_from_json(const nlohmann::json& j, const SolverConfig& base = {});

struct Diagnostics {
  std::vector<std::vector<double>> primal_sweep_deltas;  // [round][sweep]
  std::vector<std::vector<double>> dual_sweep_deltas;
  std::vector<size_t> primal_set_sizes;                  // after each round
  std::vector<size_t> dual_set_sizes;
  long long lp_solves = 0;
};

struct SolvedPolicies {
  PrimalValueSet primal;
  DualValueSet dual;
  /// Per start state: conditional intent belief and the defender's zeta_0.
  /// Empty for states outside the prior's support.
  std::vector<std::vector<double>> initial_beliefs;
  std::vector<std::vector<double>> initial_zetas;
  Diagnostics diagnostics;
  SolverConfig config;

  /// Prior-weighted attacker lower bound and defender upper bound.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
};

nlohmann::json to_json(const SolvedPolicies& policies);
SolvedPolicies solved_policies_from_json(const nlohmann::json& j);

/// Raised when a backup fails mid-run; carries the last good checkpoint.
class SolverInterrupted : public NumericalFailure {
 public:
  SolverInterrupted(const std::string& what, nlohmann::json checkpoint)
      : NumericalFailure(what), checkpoint_(std::move(checkpoint)) {}
  const nlohmann::json& checkpoint() const { return checkpoint_; }

 private:
  nlohmann::json checkpoint_;
};

/// Progress snapshot taken after every completed round.
struct Checkpoint {
  SolvedPolicies partial;
  int primal_rounds = 0;
  int dual_rounds = 0;
  bool primal_closed = false;
};

nlohmann::json to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

/// N expansion rounds of T update sweeps, primal side then dual side, with a
/// closing update after the last expansion. Deterministic given the config.
SolvedPolicies run_ncpbvi(const GameSpec& spec, const SolverConfig& config,
                          const Checkpoint* resume = nullptr);

/// argmin over stored zetas at (stage 0, s0), zero included, of
/// w(zeta) - b0.zeta. Ties go to the lexicographically smallest vector.
std::vector<double> select_initial_zeta(const DualValueSet& sets, int s0,
                                        std::span<const double> b0);

}  // namespace ncirl
