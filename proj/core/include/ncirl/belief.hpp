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

#include "ncirl/game.hpp"

namespace ncirl {

/// The attacker's information state: public state and the common posterior
/// over intents.
struct AttackerInfoState {
  int state = 0;
  std::vector<double> belief;
};

/// One-stage attacker strategy at a fixed state: `rows[theta][a]` is the
/// probability of action a for intent theta.
struct ActionConditionals {
  std::vector<std::vector<double>> rows;
};

/// Posterior after observing action `a`:
///   b'(k) = cond(a|k) b(k) / sum_j cond(a|j) b(j).
/// Throws ZeroProbabilityObservation when the denominator vanishes.
std::vector<double> update_belief(const ActionConditionals& cond,
                                  const AttackerInfoState& info, int a);

/// The unnormalized vector b(k) cond(a|k) T(s'|s,a,d). Its mass is the joint
/// probability of (a, s'); normalizing it gives update_belief's result.
std::vector<double> unnormalized_posterior_weight(
    const ActionConditionals& cond, const AttackerInfoState& info, int a,
    int next, std::span<const Outcome> transition_row);

/// Uniform distribution over `n` intents.
std::vector<double> uniform_belief(int n);

}  // namespace ncirl
