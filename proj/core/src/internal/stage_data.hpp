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

namespace ncirl::internal {

// Flattened one-state view of a game used to assemble backup LPs.
struct StageData {
  int na = 0;
  int nd = 0;
  int k = 0;
  std::vector<double> reward;             // [(a * nd + d) * k + theta]
  std::vector<std::vector<int>> succ;     // [a] -> successor states
  std::vector<std::vector<std::vector<double>>> trans;  // [a][i][d] = T(succ[a][i] | s,a,d)

  double r(int a, int d, int theta) const { return reward[(a * nd + d) * k + theta]; }
};

inline StageData stage_data(const GameSpec& spec, int s) {
  StageData sd;
  sd.na = spec.num_attacker_actions(s);
  sd.nd = spec.num_defender_actions(s);
  sd.k = spec.num_intents();
  sd.reward.resize(static_cast<size_t>(sd.na) * sd.nd * sd.k);
  for (int a = 0; a < sd.na; ++a)
    for (int d = 0; d < sd.nd; ++d)
      for (int th = 0; th < sd.k; ++th)
        sd.reward[(a * sd.nd + d) * sd.k + th] = expected_stage_reward(spec, s, a, d, th);
  sd.succ.resize(sd.na);
  sd.trans.resize(sd.na);
  for (int a = 0; a < sd.na; ++a) {
    sd.succ[a] = attacker_successor_states(spec, s, a);
    sd.trans[a].assign(sd.succ[a].size(), std::vector<double>(sd.nd, 0.0));
    for (size_t i = 0; i < sd.succ[a].size(); ++i)
      for (int d = 0; d < sd.nd; ++d)
        for (const Outcome& o : spec.successors(s, a, d))
          if (o.next == sd.succ[a][i]) sd.trans[a][i][d] += o.prob;
  }
  return sd;
}

}  // namespace ncirl::internal
