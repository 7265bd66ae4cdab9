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

#include <memory>
#include <vector>

#include "ncirl/backup.hpp"
#include "ncirl/game.hpp"
#include "ncirl/matrix_game.hpp"
#include "ncirl/rng.hpp"
#include "ncirl/value_sets.hpp"

namespace ncirl {

/// Shared step/observe protocol. After reset, callers alternate
/// (plan | step | choose) and observe; anything else raises StaleAgentState.
class Agent {
 public:
  virtual ~Agent() = default;

  /// Action distribution at the current information state.
  virtual const std::vector<double>& plan() = 0;
  /// Commits to `action`; it must have positive planned probability.
  void choose(int action);
  /// plan, sample, choose.
  int step(Rng& rng);

  int state() const { return state_; }
  int stage() const { return stage_; }
  /// Belief or zeta held by the agent; empty when it keeps none.
  virtual std::vector<double> snapshot() const { return {}; }

 protected:
  void begin(int s);
  void require_planning() const;
  void require_committed() const;
  void advance(int next);
  int committed() const { return committed_; }

  int state_ = -1;
  int stage_ = 0;

 private:
  int committed_ = -1;
  bool started_ = false;
};

class AttackerAgent : public Agent {
 public:
  virtual void observe(int a, int d, int next) = 0;
  virtual std::unique_ptr<AttackerAgent> clone() const = 0;
};

class DefenderAgent : public Agent {
 public:
  virtual void observe(int a, int d, int next) = 0;
  virtual std::unique_ptr<DefenderAgent> clone() const = 0;
};

/// Plays the primal backup strategy at its current (state, belief) for its
/// private intent. Holds no dual quantities.
class NcirlAttacker final : public AttackerAgent {
 public:
  NcirlAttacker(std::shared_ptr<const GameSpec> spec,
                std::shared_ptr<const PrimalValueSet> sets, BackupOptions options,
                int true_theta);
  void reset(int s, std::vector<double> belief);
  const std::vector<double>& plan() override;
  void observe(int a, int d, int next) override;
  std::unique_ptr<AttackerAgent> clone() const override;
  std::vector<double> snapshot() const override { return belief_; }

 private:
  std::shared_ptr<const GameSpec> spec_;
  std::shared_ptr<const PrimalValueSet> sets_;
  BackupOptions options_;
  int theta_;
  std::vector<double> belief_;
  std::vector<std::vector<double>> conditionals_;  // [theta][a] at current state
  std::vector<double> plan_;
  bool planned_ = false;
};

/// Plays the dual backup strategy at its current (state, zeta). Never sees the
/// attacker's intent, belief, or strategy.
class NcirlDefender final : public DefenderAgent {
 public:
  NcirlDefender(std::shared_ptr<const GameSpec> spec,
                std::shared_ptr<const DualValueSet> sets, BackupOptions options);
  void reset(int s, std::vector<double> zeta);
  const std::vector<double>& plan() override;
  void observe(int a, int d, int next) override;
  std::unique_ptr<DefenderAgent> clone() const override;
  std::vector<double> snapshot() const override { return zeta_; }
  /// Observations of (a, s') that the planned mixture gave zero mass; zeta
  /// was reset to zero for each.
  int fallbacks() const { return fallbacks_; }

 private:
  struct Next {
    int action;
    int next;
    std::vector<double> zeta;
    bool degenerate;
  };
  std::shared_ptr<const GameSpec> spec_;
  std::shared_ptr<const DualValueSet> sets_;
  BackupOptions options_;
  std::vector<double> zeta_;
  std::vector<Next> continuations_;
  std::vector<double> plan_;
  bool planned_ = false;
  int fallbacks_ = 0;
};

/// Complete-information equilibrium play for one fixed intent, read from a
/// Shapley solution (stage-indexed when the game has a horizon).
class EquilibriumPolicy {
 public:
  EquilibriumPolicy(const GameSpec& spec, int theta, bool attacker_side);
  const std::vector<double>& at(int stage, int s) const;

 private:
  std::vector<std::vector<std::vector<double>>> table_;  // [t][s][action]
};

class EquilibriumAttacker final : public AttackerAgent {
 public:
  EquilibriumAttacker(std::shared_ptr<const EquilibriumPolicy> policy);
  void reset(int s);
  const std::vector<double>& plan() override;
  void observe(int a, int d, int next) override;
  std::unique_ptr<AttackerAgent> clone() const override;

 private:
  std::shared_ptr<const EquilibriumPolicy> policy_;
  std::vector<double> plan_;
};

class EquilibriumDefender final : public DefenderAgent {
 public:
  EquilibriumDefender(std::shared_ptr<const EquilibriumPolicy> policy);
  void reset(int s);
  const std::vector<double>& plan() override;
  void observe(int a, int d, int next) override;
  std::unique_ptr<DefenderAgent> clone() const override;

 private:
  std::shared_ptr<const EquilibriumPolicy> policy_;
  std::vector<double> plan_;
};

/// Equilibrium attacker for the true intent of the MA-IRL arm.
std::unique_ptr<EquilibriumAttacker> equilibrium_attacker(const GameSpec& spec, int true_theta);

/// Defender that plays the complete-information equilibrium for an intent
/// inferred offline and ignores all in-game evidence.
std::unique_ptr<EquilibriumDefender> mairl_defender(const GameSpec& spec, int inferred_theta);

}  // namespace ncirl
