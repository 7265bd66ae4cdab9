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
#include <vector>

#include "ncirl/agents.hpp"
#include "ncirl/game.hpp"
#include "ncirl/rng.hpp"

namespace ncirl {

struct StageRecord {
  int state = 0;
  int attacker_action = 0;
  int defender_action = 0;
  int next = 0;
  double reward = 0.0;
  std::vector<double> attacker_belief;  // empty for agents without one
  std::vector<double> defender_zeta;
};

struct RolloutTrace {
  std::vector<StageRecord> stages;
  std::uint64_t seed = 0;
  int true_theta = 0;
  double total_reward = 0.0;  // discounted per spec
};

/// Start state drawn from the prior conditioned on the true intent.
int sample_initial_state(const GameSpec& spec, int true_theta, Rng& rng);

/// Plays `horizon` simultaneous-move stages. Both agents must have been reset
/// to the same state.
RolloutTrace rollout(const GameSpec& spec, AttackerAgent& attacker,
                     DefenderAgent& defender, int true_theta, int horizon,
                     std::uint64_t seed);

/// Discounted reward recomputed from the trace's tuples and the reward table.
double recompute_reward(const GameSpec& spec, const RolloutTrace& trace);

struct ExpectedOutcome {
  double total = 0.0;
  std::vector<double> per_stage;  // undiscounted expected reward per stage
};

/// Exact expectation over the outcome tree of both agents' mixtures and the
/// transitions. Agents are cloned at every branch; the originals are not
/// advanced. Cost grows exponentially with the horizon.
ExpectedOutcome expected_reward(const GameSpec& spec, const AttackerAgent& attacker,
                                const DefenderAgent& defender, int true_theta,
                                int horizon);

}  // namespace ncirl
