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

#include "ncirl/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ncirl {
namespace {

constexpr double kStochasticTol = 1e-9;

std::string at(int s, int a, int d) {
  std::ostringstream os;
  os << "(s=" << s << ",a=" << a << ",d=" << d << ")";
  return os.str();
}

void check_index(int value, int bound, const char* what) {
  if (value < 0 || value >= bound) {
    throw std::out_of_range(std::string(what) + " index " +
                            std::to_string(value) + " out of range [0," +
                            std::to_string(bound) + ")");
  }
}

}  // namespace

const std::vector<Outcome>& GameSpec::successors(int s, int a, int d) const {
  check_index(s, num_states(), "state");
  check_index(a, num_attacker_actions(s), "attacker action");
  check_index(d, num_defender_actions(s), "defender action");
  return outcomes[s][a][d];
}

void GameSpec::refresh_reward_bound() {
  double bound = 0.0;
  for (const auto& by_a : outcomes)
    for (const auto& by_d : by_a)
      for (const auto& succ : by_d)
        for (const Outcome& o : succ)
          for (double r : o.reward) bound = std::max(bound, std::abs(r));
  r_max = bound;
}

std::vector<double> GameSpec::intent_marginal() const {
  std::vector<double> b(num_intents(), 0.0);
  for (const auto& row : prior)
    for (int k = 0; k < num_intents() && k < static_cast<int>(row.size()); ++k)
      b[k] += row[k];
  return b;
}

std::vector<double> GameSpec::state_marginal() const {
  std::vector<double> p(num_states(), 0.0);
  for (int s = 0; s < num_states() && s < static_cast<int>(prior.size()); ++s)
    for (double x : prior[s]) p[s] += x;
  return p;
}

std::vector<Violation> validate_game(const GameSpec& spec) {
  std::vector<Violation> out;
  const int n = spec.num_states();
  const int k = spec.num_intents();
  if (n == 0) out.push_back({"states", "no states"});
  if (k == 0) out.push_back({"intents", "no intent parameters"});
  if (static_cast<int>(spec.attacker_actions.size()) != n ||
      static_cast<int>(spec.defender_actions.size()) != n ||
      static_cast<int>(spec.outcomes.size()) != n) {
    out.push_back({"actions", "per-state action tables do not match |S|"});
    return out;
  }

  for (int s = 0; s < n; ++s) {
    const int na = spec.num_attacker_actions(s);
    const int nd = spec.num_defender_actions(s);
    if (na == 0) out.push_back({"s=" + std::to_string(s), "no attacker action"});
    if (nd == 0) out.push_back({"s=" + std::to_string(s), "no defender action"});
    if (static_cast<int>(spec.outcomes[s].size()) != na) {
      out.push_back({"s=" + std::to_string(s),
                     "transition table rows do not match A(s)"});
      continue;
    }
    for (int a = 0; a < na; ++a) {
      if (static_cast<int>(spec.outcomes[s][a].size()) != nd) {
        out.push_back({at(s, a, -1), "transition table rows do not match D(s)"});
        continue;
      }
      for (int d = 0; d < nd; ++d) {
        double total = 0.0;
        bool sign_ok = true;
        for (const Outcome& o : spec.outcomes[s][a][d]) {
          if (o.next < 0 || o.next >= n) {
            out.push_back({at(s, a, d), "successor index out of range"});
          }
          if (!(o.prob >= 0.0) || !std::isfinite(o.prob)) sign_ok = false;
          total += o.prob;
          if (static_cast<int>(o.reward.size()) != k) {
            out.push_back({at(s, a, d), "reward vector size differs from |Theta|"});
          } else {
            for (double r : o.reward) {
              if (!std::isfinite(r) || std::abs(r) > spec.r_max + 1e-12) {
                out.push_back({at(s, a, d), "reward exceeds declared rMax"});
                break;
              }
            }
          }
        }
        if (!sign_ok) {
          out.push_back({at(s, a, d), "negative transition probability"});
        }
        if (std::abs(total - 1.0) > kStochasticTol) {
          std::ostringstream os;
          os << "transition row sums to " << total;
          out.push_back({at(s, a, d), os.str()});
        }
      }
    }
  }

  if (static_cast<int>(spec.prior.size()) != n) {
    out.push_back({"prior", "prior rows do not match |S|"});
  } else {
    double total = 0.0;
    for (int s = 0; s < n; ++s) {
      if (static_cast<int>(spec.prior[s].size()) != k) {
        out.push_back({"prior s=" + std::to_string(s), "row size differs from |Theta|"});
        continue;
      }
      for (double p : spec.prior[s]) {
        if (p < 0.0) out.push_back({"prior s=" + std::to_string(s), "negative mass"});
        total += p;
      }
    }
    if (std::abs(total - 1.0) > kStochasticTol) {
      std::ostringstream os;
      os << "prior sums to " << total;
      out.push_back({"prior", os.str()});
    }
  }

  if (spec.horizon) {
    if (*spec.horizon <= 0) out.push_back({"horizon", "horizon must be positive"});
    if (!(spec.discount >= 0.0 && spec.discount <= 1.0)) {
      out.push_back({"discount", "finite-horizon discount must lie in [0,1]"});
    }
  } else if (!(spec.discount >= 0.0 && spec.discount < 1.0)) {
    out.push_back({"discount", "discount must lie in [0,1) without a horizon"});
  }
  return out;
}

double expected_stage_reward(const GameSpec& spec, int s, int a, int d,
                             int theta) {
  check_index(theta, spec.num_intents(), "intent");
  double total = 0.0;
  for (const Outcome& o : spec.successors(s, a, d)) {
    total += o.prob * o.reward[theta];
  }
  return total;
}

CompleteInfoGame restrict_to_intent(const GameSpec& spec, int theta) {
  check_index(theta, spec.num_intents(), "intent");
  CompleteInfoGame g;
  g.discount = spec.discount;
  g.horizon = spec.horizon;
  const int n = spec.num_states();
  g.attacker_action_counts.resize(n);
  g.defender_action_counts.resize(n);
  g.outcomes.resize(n);
  for (int s = 0; s < n; ++s) {
    const int na = spec.num_attacker_actions(s);
    const int nd = spec.num_defender_actions(s);
    g.attacker_action_counts[s] = na;
    g.defender_action_counts[s] = nd;
    g.outcomes[s].assign(na, std::vector<std::vector<CompleteInfoOutcome>>(nd));
    for (int a = 0; a < na; ++a)
      for (int d = 0; d < nd; ++d)
        for (const Outcome& o : spec.outcomes[s][a][d])
          g.outcomes[s][a][d].push_back({o.next, o.prob, o.reward[theta]});
  }
  return g;
}

double expected_stage_reward(const CompleteInfoGame& game, int s, int a,
                             int d) {
  check_index(s, game.num_states(), "state");
  check_index(a, game.attacker_action_counts[s], "attacker action");
  check_index(d, game.defender_action_counts[s], "defender action");
  double total = 0.0;
  for (const auto& o : game.outcomes[s][a][d]) total += o.prob * o.reward;
  return total;
}

std::vector<int> attacker_successor_states(const GameSpec& spec, int s,
                                           int a) {
  std::vector<int> out;
  for (int d = 0; d < spec.num_defender_actions(s); ++d) {
    for (const Outcome& o : spec.successors(s, a, d)) {
      if (o.prob > 0.0) out.push_back(o.next);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<bool>> reachable_by_stage(const GameSpec& spec) {
  const int n = spec.num_states();
  if (!spec.horizon) return {std::vector<bool>(n, true)};
  const int stages = *spec.horizon;
  std::vector<std::vector<bool>> reach(stages, std::vector<bool>(n, false));
  const auto marginal = spec.state_marginal();
  for (int s = 0; s < n; ++s) reach[0][s] = marginal[s] > 0.0;
  for (int t = 0; t + 1 < stages; ++t) {
    for (int s = 0; s < n; ++s) {
      if (!reach[t][s]) continue;
      for (int a = 0; a < spec.num_attacker_actions(s); ++a)
        for (int d = 0; d < spec.num_defender_actions(s); ++d)
          for (const Outcome& o : spec.outcomes[s][a][d])
            if (o.prob > 0.0) reach[t + 1][o.next] = true;
    }
  }
  return reach;
}

}  // namespace ncirl
