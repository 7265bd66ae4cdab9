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

#include "ncirl/sim.hpp"

#include <cmath>

#include "ncirl/errors.hpp"

namespace ncirl {
namespace {

const Outcome& find_outcome(const GameSpec& spec, const StageRecord& r) {
  for (const Outcome& o : spec.successors(r.state, r.attacker_action, r.defender_action)) {
    if (o.next == r.next && o.prob > 0.0) return o;
  }
  throw std::invalid_argument("trace step has zero model probability");
}

void expand(const GameSpec& spec, const AttackerAgent& attacker,
            const DefenderAgent& defender, int theta, int depth, int horizon,
            double weight, double discount_acc, ExpectedOutcome& out) {
  if (depth >= horizon || weight == 0.0) return;
  auto att = attacker.clone();
  auto def = defender.clone();
  const auto pa = att->plan();
  const auto pd = def->plan();
  const int s = att->state();
  for (size_t a = 0; a < pa.size(); ++a) {
    if (!(pa[a] > 0.0)) continue;
    for (size_t d = 0; d < pd.size(); ++d) {
      if (!(pd[d] > 0.0)) continue;
      for (const Outcome& o : spec.successors(s, static_cast<int>(a), static_cast<int>(d))) {
        if (!(o.prob > 0.0)) continue;
        const double w = weight * pa[a] * pd[d] * o.prob;
        out.per_stage[depth] += w * o.reward[theta];
        out.total += w * discount_acc * o.reward[theta];
        if (depth + 1 >= horizon) continue;
        auto na = att->clone();
        auto nd = def->clone();
        na->choose(static_cast<int>(a));
        nd->choose(static_cast<int>(d));
        na->observe(static_cast<int>(a), static_cast<int>(d), o.next);
        nd->observe(static_cast<int>(a), static_cast<int>(d), o.next);
        expand(spec, *na, *nd, theta, depth + 1, horizon, w, discount_acc * spec.discount, out);
      }
    }
  }
}

}  // namespace

int sample_initial_state(const GameSpec& spec, int true_theta, Rng& rng) {
  std::vector<double> w(spec.num_states());
  for (int s = 0; s < spec.num_states(); ++s) w[s] = spec.prior[s][true_theta];
  const int s = rng.categorical(w);
  if (s < 0) throw ConfigError("prior gives the true intent zero mass");
  return s;
}

RolloutTrace rollout(const GameSpec& spec, AttackerAgent& attacker,
                     DefenderAgent& defender, int true_theta, int horizon,
                     std::uint64_t seed) {
  if (attacker.state() != defender.state()) {
    throw StaleAgentState("agents disagree on the current state");
  }
  RolloutTrace trace;
  trace.seed = seed;
  trace.true_theta = true_theta;
  Rng rng(seed);
  double g = 1.0;
  for (int t = 0; t < horizon; ++t) {
    StageRecord r;
    r.state = attacker.state();
    r.attacker_belief = attacker.snapshot();
    r.defender_zeta = defender.snapshot();
    r.attacker_action = attacker.step(rng);
    r.defender_action = defender.step(rng);
    const auto& row = spec.successors(r.state, r.attacker_action, r.defender_action);
    std::vector<double> probs;
    for (const Outcome& o : row) probs.push_back(o.prob);
    const Outcome& o = row.at(rng.categorical(probs));
    r.next = o.next;
    r.reward = o.reward[true_theta];
    trace.total_reward += g * r.reward;
    g *= spec.discount;
    attacker.observe(r.attacker_action, r.defender_action, r.next);
    defender.observe(r.attacker_action, r.defender_action, r.next);
    trace.stages.push_back(std::move(r));
  }
  return trace;
}

double recompute_reward(const GameSpec& spec, const RolloutTrace& trace) {
  double total = 0.0;
  double g = 1.0;
  for (const auto& r : trace.stages) {
    total += g * find_outcome(spec, r).reward.at(trace.true_theta);
    g *= spec.discount;
  }
  return total;
}

ExpectedOutcome expected_reward(const GameSpec& spec, const AttackerAgent& attacker,
                                const DefenderAgent& defender, int true_theta,
                                int horizon) {
  ExpectedOutcome out;
  out.per_stage.assign(std::max(horizon, 0), 0.0);
  if (attacker.state() != defender.state()) {
    throw StaleAgentState("agents disagree on the current state");
  }
  expand(spec, attacker, defender, true_theta, 0, horizon, 1.0, 1.0, out);
  return out;
}

}  // namespace ncirl
