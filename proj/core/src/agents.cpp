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

#include "ncirl/agents.hpp"

#include "ncirl/belief.hpp"
#include "ncirl/dual.hpp"
#include "ncirl/errors.hpp"
#include "ncirl/primal.hpp"

namespace ncirl {
namespace {

int stage_index(const GameSpec& spec, int stage) {
  if (!spec.horizon) return 0;
  if (stage >= *spec.horizon) throw StaleAgentState("agent asked to act past the horizon");
  return stage;
}

}  // namespace

void Agent::begin(int s) {
  state_ = s;
  stage_ = 0;
  committed_ = -1;
  started_ = true;
}

void Agent::require_planning() const {
  if (!started_) throw StaleAgentState("agent used before reset");
  if (committed_ >= 0) throw StaleAgentState("agent already committed; observe first");
}

void Agent::require_committed() const {
  if (!started_) throw StaleAgentState("agent used before reset");
  if (committed_ < 0) throw StaleAgentState("observe without a committed action");
}

void Agent::advance(int next) {
  state_ = next;
  ++stage_;
  committed_ = -1;
}

void Agent::choose(int action) {
  const auto& p = plan();
  if (action < 0 || action >= static_cast<int>(p.size()) || !(p[action] > 0.0)) {
    throw StaleAgentState("chosen action has zero planned probability");
  }
  committed_ = action;
}

int Agent::step(Rng& rng) {
  const int a = rng.categorical(plan());
  choose(a);
  return a;
}

NcirlAttacker::NcirlAttacker(std::shared_ptr<const GameSpec> spec,
                             std::shared_ptr<const PrimalValueSet> sets,
                             BackupOptions options, int true_theta)
    : spec_(std::move(spec)), sets_(std::move(sets)), options_(options), theta_(true_theta) {}

void NcirlAttacker::reset(int s, std::vector<double> belief) {
  begin(s);
  belief_ = std::move(belief);
  planned_ = false;
}

const std::vector<double>& NcirlAttacker::plan() {
  require_planning();
  if (!planned_) {
    const auto res = solve_pa(*spec_, *sets_, stage_index(*spec_, stage_), state_, belief_, options_);
    conditionals_ = res.strategy;
    plan_ = conditionals_.at(theta_);
    planned_ = true;
  }
  return plan_;
}

void NcirlAttacker::observe(int a, int d, int next) {
  require_committed();
  (void)d;
  if (a != committed()) throw StaleAgentState("attacker observed an action it did not take");
  belief_ = update_belief({conditionals_}, {state_, belief_}, a);
  advance(next);
  planned_ = false;
}

std::unique_ptr<AttackerAgent> NcirlAttacker::clone() const {
  return std::make_unique<NcirlAttacker>(*this);
}

NcirlDefender::NcirlDefender(std::shared_ptr<const GameSpec> spec,
                             std::shared_ptr<const DualValueSet> sets, BackupOptions options)
    : spec_(std::move(spec)), sets_(std::move(sets)), options_(options) {}

void NcirlDefender::reset(int s, std::vector<double> zeta) {
  begin(s);
  zeta_ = std::move(zeta);
  planned_ = false;
}

const std::vector<double>& NcirlDefender::plan() {
  require_planning();
  if (!planned_) {
    const auto res = solve_pd(*spec_, *sets_, stage_index(*spec_, stage_), state_, zeta_, options_);
    plan_ = res.defender;
    continuations_.clear();
    for (const auto& c : res.continuations) {
      continuations_.push_back({c.action, c.next, c.zeta_next, c.degenerate});
    }
    planned_ = true;
  }
  return plan_;
}

void NcirlDefender::observe(int a, int d, int next) {
  require_committed();
  if (d != committed()) throw StaleAgentState("defender observed an action it did not take");
  std::vector<double> zeta(zeta_.size(), 0.0);
  for (const auto& c : continuations_) {
    if (c.action != a || c.next != next) continue;
    if (c.degenerate) ++fallbacks_;
    else zeta = c.zeta;
  }
  zeta_ = std::move(zeta);
  advance(next);
  planned_ = false;
}

std::unique_ptr<DefenderAgent> NcirlDefender::clone() const {
  return std::make_unique<NcirlDefender>(*this);
}

EquilibriumPolicy::EquilibriumPolicy(const GameSpec& spec, int theta, bool attacker_side) {
  const auto sh = shapley_solve(restrict_to_intent(spec, theta));
  table_ = attacker_side ? sh.attacker_policy : sh.defender_policy;
}

const std::vector<double>& EquilibriumPolicy::at(int stage, int s) const {
  if (table_.size() == 1) return table_[0].at(s);
  if (stage >= static_cast<int>(table_.size())) {
    throw StaleAgentState("agent asked to act past the horizon");
  }
  return table_[stage].at(s);
}

EquilibriumAttacker::EquilibriumAttacker(std::shared_ptr<const EquilibriumPolicy> policy)
    : policy_(std::move(policy)) {}

void EquilibriumAttacker::reset(int s) { begin(s); }

const std::vector<double>& EquilibriumAttacker::plan() {
  require_planning();
  plan_ = policy_->at(stage_, state_);
  return plan_;
}

void EquilibriumAttacker::observe(int a, int d, int next) {
  require_committed();
  (void)d;
  if (a != committed()) throw StaleAgentState("attacker observed an action it did not take");
  advance(next);
}

std::unique_ptr<AttackerAgent> EquilibriumAttacker::clone() const {
  return std::make_unique<EquilibriumAttacker>(*this);
}

EquilibriumDefender::EquilibriumDefender(std::shared_ptr<const EquilibriumPolicy> policy)
    : policy_(std::move(policy)) {}

void EquilibriumDefender::reset(int s) { begin(s); }

const std::vector<double>& EquilibriumDefender::plan() {
  require_planning();
  plan_ = policy_->at(stage_, state_);
  return plan_;
}

void EquilibriumDefender::observe(int a, int d, int next) {
  require_committed();
  (void)a;
  if (d != committed()) throw StaleAgentState("defender observed an action it did not take");
  advance(next);
}

std::unique_ptr<DefenderAgent> EquilibriumDefender::clone() const {
  return std::make_unique<EquilibriumDefender>(*this);
}

std::unique_ptr<EquilibriumAttacker> equilibrium_attacker(const GameSpec& spec, int true_theta) {
  return std::make_unique<EquilibriumAttacker>(
      std::make_shared<const EquilibriumPolicy>(spec, true_theta, true));
}

std::unique_ptr<EquilibriumDefender> mairl_defender(const GameSpec& spec, int inferred_theta) {
  return std::make_unique<EquilibriumDefender>(
      std::make_shared<const EquilibriumPolicy>(spec, inferred_theta, false));
}

}  // namespace ncirl
