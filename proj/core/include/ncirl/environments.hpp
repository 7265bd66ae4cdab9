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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncirl/game.hpp"

namespace ncirl {

struct Exploit {
  int from = 0;
  int to = 0;
  double beta = 0.8;
};

/// Acyclic condition graph. Node ids follow a topological order.
struct AttackGraph {
  int num_nodes = 0;
  std::vector<Exploit> edges;
  std::vector<int> roots;
  std::vector<std::vector<double>> node_values;  // [theta][node]; roots carry 0
  double attack_cost = 0.01;                     // per attempted exploit
  double defense_cost = 0.01;                    // per blocked exploit
};

struct GraphGenParams {
  int nodes = 6;
  std::uint64_t seed = 0;
  double beta = 0.8;
  int intents = 10;
  int num_roots = 1;
  int max_degree = 3;
  int max_retries = 100;
  double attack_cost = 0.01;
  double defense_cost = 0.01;
  // Node values are U^p before normalization; p > 1 concentrates each intent
  // on fewer nodes.
  double value_exponent = 1.0;
};

struct CompileOptions {
  int attacker_budget = 1;
  int defender_budget = 1;
  int state_cap = 5000;
  int horizon = 0;  // 0 = graph size
};

/// Every attack graph invariant the generator guarantees.
std::vector<std::string> check_attack_graph(const AttackGraph& g);

/// Throws GenerationFailure when the degree caps cannot be met.
AttackGraph generate_attack_graph(const GraphGenParams& params);

/// States are reachable enabled-node sets (bitmasks over nodes). Throws
/// StateExplosion past the state cap.
GameSpec compile_attack_game(const AttackGraph& g, const CompileOptions& options = {});

/// Enabled-node bitmask of each compiled state, parsed from its label.
std::vector<std::uint32_t> attack_state_masks(const GameSpec& spec);

/// Two-location thief/guard game, two stages, intents {1/3, 2/3}.
GameSpec patrolling_game();

/// Patrolling state index for thief and guard locations (0 = m, 1 = g).
inline int patrol_state(int thief, int guard) { return thief * 2 + guard; }

nlohmann::json to_json(const AttackGraph& g);
AttackGraph attack_graph_from_json(const nlohmann::json& j);
std::string to_dot(const AttackGraph& g);

}  // namespace ncirl
