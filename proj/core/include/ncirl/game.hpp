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

#include <optional>
#include <string>
#include <vector>

namespace ncirl {

/// One successor of a joint action: probability and the attacker's reward for
/// every intent parameter.
struct Outcome {
  int next = 0;
  double prob = 0.0;
  std::vector<double> reward;  // indexed by intent
};

/// Tabular zero-sum Markov game with one-sided incomplete information.
///
/// The attacker privately knows the intent parameter; both players observe the
/// state and each other's actions. Action sets are per state, so
/// `outcomes[s][a][d]` is only defined for `a < attacker_actions[s].size()` and
/// `d < defender_actions[s].size()`. Rewards are the attacker's; the defender
/// receives their negation.
struct GameSpec {
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> attacker_actions;
  std::vector<std::vector<std::string>> defender_actions;
  std::vector<std::vector<std::vector<std::vector<Outcome>>>> outcomes;
  std::vector<std::string> intents;
  std::vector<std::vector<double>> prior;  // prior[s][theta]
  double discount = 0.0;
  std::optional<int> horizon;
  double r_max = 0.0;  // max |R| over tabulated entries

  int num_states() const { return static_cast<int>(states.size()); }
  int num_intents() const { return static_cast<int>(intents.size()); }
  int num_attacker_actions(int s) const {
    return static_cast<int>(attacker_actions.at(s).size());
  }
  int num_defender_actions(int s) const {
    return static_cast<int>(defender_actions.at(s).size());
  }
  const std::vector<Outcome>& successors(int s, int a, int d) const;

  /// Number of value-set stages: the horizon when finite, otherwise one.
  int num_stages() const { return horizon ? *horizon : 1; }

  /// Recomputes `r_max` from the reward table.
  void refresh_reward_bound();

  std::vector<double> intent_marginal() const;
  std::vector<double> state_marginal() const;
};

/// Complete-information restriction of a GameSpec at a fixed intent.
struct CompleteInfoOutcome {
  int next = 0;
  double prob = 0.0;
  double reward = 0.0;
};

struct CompleteInfoGame {
  std::vector<int> attacker_action_counts;
  std::vector<int> defender_action_counts;
  std::vector<std::vector<std::vector<std::vector<CompleteInfoOutcome>>>>
      outcomes;
  double discount = 0.0;
  std::optional<int> horizon;

  int num_states() const {
    return static_cast<int>(attacker_action_counts.size());
  }
};

struct Violation {
  std::string location;
  std::string message;
};

/// Every violated structural invariant; empty iff the game is well formed.
std::vector<Violation> validate_game(const GameSpec& spec);

/// Sum over successors of T(s'|s,a,d) R(s,a,d,s';theta).
double expected_stage_reward(const GameSpec& spec, int s, int a, int d,
                             int theta);

CompleteInfoGame restrict_to_intent(const GameSpec& spec, int theta);

/// Complete-information analogue of expected_stage_reward.
double expected_stage_reward(const CompleteInfoGame& game, int s, int a, int d);

/// States reachable after attacker action `a` under some defender action,
/// ascending.
std::vector<int> attacker_successor_states(const GameSpec& spec, int s, int a);

/// stage_reachable[t][s]: state s has positive probability at stage t under
/// some action profile, starting from the prior's state support.
std::vector<std::vector<bool>> reachable_by_stage(const GameSpec& spec);

}  // namespace ncirl
