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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "ncirl/environments.hpp"
#include "ncirl/errors.hpp"

namespace ncirl {
namespace {

AttackGraph hand_graph(int nodes, std::vector<Exploit> edges, std::vector<double> values) {
  AttackGraph g;
  g.num_nodes = nodes;
  g.roots = {0};
  g.edges = std::move(edges);
  g.node_values = {std::move(values)};
  return g;
}

const Outcome* find_outcome(const GameSpec& spec, int s, int a, int d, int next) {
  for (const auto& o : spec.successors(s, a, d))
    if (o.next == next) return &o;
  return nullptr;
}

TEST(AttackGraphGenerator, SatisfiesInvariants) {
  for (int n = 2; n <= 12; ++n) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      GraphGenParams p;
      p.nodes = n;
      p.seed = seed;
      p.intents = 4;
      const auto g = generate_attack_graph(p);
      EXPECT_TRUE(check_attack_graph(g).empty());
      std::vector<int> in(n, 0), out(n, 0);
      for (const auto& e : g.edges) {
        EXPECT_LT(e.from, e.to);
        EXPECT_DOUBLE_EQ(e.beta, 0.8);
        ++in[e.to];
        ++out[e.from];
      }
      for (int i = 0; i < n; ++i) {
        EXPECT_LE(out[i], 3);
        EXPECT_LE(in[i], 3);
        if (i > 0) {
          EXPECT_GE(in[i], 1) << "node " << i << " unreachable";
        }
      }
      ASSERT_EQ(g.node_values.size(), 4u);
      for (const auto& row : g.node_values) {
        EXPECT_EQ(row[0], 0.0);
        EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
        for (double v : row) EXPECT_GE(v, 0.0);
      }
    }
  }
}

TEST(AttackGraphGenerator, DeterministicInSeed) {
  GraphGenParams p;
  p.nodes = 9;
  p.seed = 77;
  EXPECT_EQ(to_json(generate_attack_graph(p)).dump(), to_json(generate_attack_graph(p)).dump());
  auto q = p;
  q.seed = 78;
  EXPECT_NE(to_json(generate_attack_graph(p)).dump(), to_json(generate_attack_graph(q)).dump());
}

TEST(AttackGraphGenerator, ValueExponentConcentratesValue) {
  GraphGenParams p;
  p.nodes = 10;
  p.seed = 5;
  p.intents = 20;
  auto q = p;
  q.value_exponent = 4.0;
  const auto flat = generate_attack_graph(p);
  const auto peaked = generate_attack_graph(q);
  double flat_max = 0.0, peaked_max = 0.0;
  for (int th = 0; th < 20; ++th) {
    flat_max += *std::max_element(flat.node_values[th].begin(), flat.node_values[th].end());
    peaked_max += *std::max_element(peaked.node_values[th].begin(), peaked.node_values[th].end());
    EXPECT_NEAR(std::accumulate(peaked.node_values[th].begin(), peaked.node_values[th].end(), 0.0), 1.0, 1e-12);
  }
  EXPECT_GT(peaked_max, flat_max);
}

TEST(AttackGraphGenerator, RejectsBadParameters) {
  GraphGenParams p;
  p.nodes = 1;
  EXPECT_THROW(generate_attack_graph(p), ConfigError);
  p.nodes = 32;
  EXPECT_THROW(generate_attack_graph(p), ConfigError);
  p.nodes = 6;
  p.value_exponent = 0.0;
  EXPECT_THROW(generate_attack_graph(p), ConfigError);
  p.value_exponent = 1.0;
  p.num_roots = 6;
  EXPECT_THROW(generate_attack_graph(p), ConfigError);
  p.num_roots = 1;
  p.max_degree = 0;
  EXPECT_THROW(generate_attack_graph(p), GenerationFailure);
}

TEST(AttackGame, SingleEdgeTransitions) {
  const auto g = hand_graph(2, {{0, 1, 0.8}}, {0.0, 1.0});
  const auto spec = compile_attack_game(g);
  ASSERT_EQ(spec.num_states(), 2);
  EXPECT_EQ(spec.states[0], "{0}");
  EXPECT_EQ(spec.states[1], "{0,1}");
  ASSERT_EQ(spec.attacker_actions[0], (std::vector<std::string>{"noop", "e0"}));
  ASSERT_EQ(spec.defender_actions[0], (std::vector<std::string>{"noop", "block:e0"}));
  const auto* success = find_outcome(spec, 0, 1, 0, 1);
  const auto* failure = find_outcome(spec, 0, 1, 0, 0);
  ASSERT_TRUE(success && failure);
  EXPECT_DOUBLE_EQ(success->prob, 0.8);
  EXPECT_DOUBLE_EQ(failure->prob, 0.2);
  EXPECT_NEAR(success->reward[0], 1.0 - 0.01, 1e-12);
  EXPECT_NEAR(failure->reward[0], -0.01, 1e-12);
  // Blocked exploit: no progress, both costs paid.
  ASSERT_EQ(spec.successors(0, 1, 1).size(), 1u);
  EXPECT_EQ(spec.successors(0, 1, 1)[0].next, 0);
  EXPECT_NEAR(spec.successors(0, 1, 1)[0].reward[0], 0.0, 1e-12);
  // Idle defender block still costs the defender.
  EXPECT_NEAR(spec.successors(0, 0, 1)[0].reward[0], 0.01, 1e-12);
  // Terminal state: one idle action each, zero reward self-loop.
  EXPECT_EQ(spec.num_attacker_actions(1), 1);
  EXPECT_EQ(spec.successors(1, 0, 0)[0].next, 1);
  EXPECT_EQ(spec.successors(1, 0, 0)[0].reward[0], 0.0);
  EXPECT_EQ(spec.horizon, 2);
  EXPECT_TRUE(validate_game(spec).empty());
}

TEST(AttackGame, BreadthFirstStateCounts) {
  const auto chain = compile_attack_game(hand_graph(3, {{0, 1, 0.8}, {1, 2, 0.8}}, {0.0, 0.5, 0.5}));
  EXPECT_EQ(chain.num_states(), 3);
  auto star = hand_graph(3, {{0, 1, 0.8}, {0, 2, 0.8}}, {0.0, 0.5, 0.5});
  EXPECT_EQ(compile_attack_game(star).num_states(), 4);
  CompileOptions two;
  two.attacker_budget = 2;
  const auto spec = compile_attack_game(star, two);
  EXPECT_EQ(spec.num_states(), 4);
  EXPECT_EQ(spec.num_attacker_actions(0), 4);  // noop, e0, e1, e0+e1
  CompileOptions cap;
  cap.state_cap = 2;
  EXPECT_THROW(compile_attack_game(star, cap), StateExplosion);
}

TEST(AttackGame, TransitionsOnlyEnableNodesAndDecomposeRewards) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GraphGenParams p;
    p.nodes = 7;
    p.seed = seed;
    p.intents = 3;
    const auto g = generate_attack_graph(p);
    const auto spec = compile_attack_game(g);
    ASSERT_TRUE(validate_game(spec).empty());
    const auto masks = attack_state_masks(spec);
    for (int s = 0; s < spec.num_states(); ++s)
      for (int a = 0; a < spec.num_attacker_actions(s); ++a)
        for (int d = 0; d < spec.num_defender_actions(s); ++d) {
          const auto count = [](const std::string& label) {
            return label == "noop" ? 0 : static_cast<int>(std::count(label.begin(), label.end(), '+')) + 1;
          };
          const double cost = -0.01 * count(spec.attacker_actions[s][a]) + 0.01 * count(spec.defender_actions[s][d]);
          double total = 0.0;
          for (const auto& o : spec.successors(s, a, d)) {
            const auto before = masks[s], after = masks[o.next];
            EXPECT_EQ(before & after, before);
            total += o.prob;
            for (int th = 0; th < 3; ++th) {
              double gained = 0.0;
              for (int n = 0; n < 7; ++n)
                if ((after >> n & 1u) && !(before >> n & 1u)) gained += g.node_values[th][n];
              EXPECT_NEAR(o.reward[th], gained + cost, 1e-12);
            }
          }
          EXPECT_NEAR(total, 1.0, 1e-12);
        }
  }
}

TEST(AttackGame, UniformPriorAtRootState) {
  GraphGenParams p;
  p.intents = 5;
  const auto spec = compile_attack_game(generate_attack_graph(p));
  for (int th = 0; th < 5; ++th) EXPECT_DOUBLE_EQ(spec.prior[0][th], 0.2);
  for (int s = 1; s < spec.num_states(); ++s)
    for (double x : spec.prior[s]) EXPECT_EQ(x, 0.0);
}

TEST(AttackGraphJson, RoundTripAndDot) {
  GraphGenParams p;
  p.nodes = 5;
  p.seed = 3;
  const auto g = generate_attack_graph(p);
  const auto j = to_json(g);
  EXPECT_EQ(to_json(attack_graph_from_json(j)).dump(), j.dump());
  const auto dot = to_dot(g);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("n0 [label=\"0\", shape=doublecircle]"), std::string::npos);
  EXPECT_NE(dot.find("n" + std::to_string(g.edges[0].from) + " -> n" + std::to_string(g.edges[0].to)),
            std::string::npos);
  auto bad = j;
  bad["edges"][0] = {3, 1, 0.8};
  EXPECT_THROW(attack_graph_from_json(bad), ConfigError);
  bad = j;
  bad["edges"][0] = {0, 1};
  EXPECT_THROW(attack_graph_from_json(bad), ConfigError);
}

TEST(Patrolling, RewardTableAndShape) {
  const auto spec = patrolling_game();
  EXPECT_TRUE(validate_game(spec).empty());
  EXPECT_EQ(spec.horizon, 2);
  EXPECT_EQ(spec.discount, 1.0);
  const double theta[2] = {1.0 / 3.0, 2.0 / 3.0};
  for (int s = 0; s < 4; ++s)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d) {
        const auto& succ = spec.successors(s, a, d);
        ASSERT_EQ(succ.size(), 1u);
        const int thief = (s / 2) ^ a, guard = (s % 2) ^ d;
        EXPECT_EQ(succ[0].next, patrol_state(thief, guard));
        for (int th = 0; th < 2; ++th) {
          const double t = theta[th];
          const double want = thief == 0 ? (guard == 0 ? t / 2 : t) : (guard == 0 ? 1 - t : (1 - t) / 2);
          EXPECT_NEAR(succ[0].reward[th], want, 1e-15);
        }
      }
  EXPECT_NEAR(spec.r_max, 2.0 / 3.0, 1e-15);
}

}  // namespace
}  // namespace ncirl
