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

#include "ncirl/environments.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>

#include "ncirl/errors.hpp"
#include "ncirl/rng.hpp"

namespace ncirl {
namespace {

std::string mask_label(std::uint32_t mask, int n) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < n; ++i) {
    if (!(mask >> i & 1u)) continue;
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

// All subsets of `items` with at most `budget` elements, empty set first,
// then by size and lexicographic order.
std::vector<std::vector<int>> bounded_subsets(const std::vector<int>& items, int budget) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> frontier{{}};
  for (int size = 1; size <= budget; ++size) {
    std::vector<std::vector<int>> next;
    for (const auto& base : frontier) {
      const size_t start = base.empty() ? 0
          : static_cast<size_t>(std::find(items.begin(), items.end(), base.back()) - items.begin()) + 1;
      for (size_t i = start; i < items.size(); ++i) {
        auto s = base;
        s.push_back(items[i]);
        next.push_back(std::move(s));
      }
    }
    for (const auto& s : next) out.push_back(s);
    frontier = std::move(next);
  }
  return out;
}

std::string action_label(const std::vector<int>& edges, const char* prefix) {
  if (edges.empty()) return "noop";
  std::string out = prefix;
  for (size_t i = 0; i < edges.size(); ++i) {
    if (i) out += "+";
    out += "e" + std::to_string(edges[i]);
  }
  return out;
}

}  // namespace

std::vector<std::string> check_attack_graph(const AttackGraph& g) {
  std::vector<std::string> out;
  if (g.num_nodes < 2) out.push_back("fewer than two nodes");
  if (g.num_nodes > 31) out.push_back("more than 31 nodes");
  if (g.roots.empty()) out.push_back("no root nodes");
  std::vector<int> in(g.num_nodes, 0), outd(g.num_nodes, 0);
  for (const auto& e : g.edges) {
    if (e.from < 0 || e.from >= g.num_nodes || e.to < 0 || e.to >= g.num_nodes) {
      out.push_back("edge endpoint out of range");
      continue;
    }
    if (e.from >= e.to) out.push_back("edge against topological order");
    if (!(e.beta >= 0.0 && e.beta <= 1.0)) out.push_back("success probability outside [0,1]");
    ++in[e.to];
    ++outd[e.from];
  }
  for (int i = 0; i < g.num_nodes; ++i) {
    if (in[i] > 3 || outd[i] > 3) out.push_back("node " + std::to_string(i) + " exceeds degree 3");
  }
  for (const auto& row : g.node_values) {
    if (static_cast<int>(row.size()) != g.num_nodes) out.push_back("node value row size mismatch");
  }
  return out;
}

AttackGraph generate_attack_graph(const GraphGenParams& params) {
  if (params.nodes < 2 || params.nodes > 31) throw ConfigError("graph size must lie in [2, 31]");
  if (params.num_roots < 1 || params.num_roots >= params.nodes) {
    throw ConfigError("root count must lie in [1, nodes)");
  }
  if (!(params.value_exponent > 0.0)) throw ConfigError("value exponent must be positive");
  if (params.intents < 1) throw ConfigError("at least one intent required");
  Rng rng(params.seed);
  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    AttackGraph g;
    g.num_nodes = params.nodes;
    g.attack_cost = params.attack_cost;
    g.defense_cost = params.defense_cost;
    for (int r = 0; r < params.num_roots; ++r) g.roots.push_back(r);
    std::vector<int> out_deg(params.nodes, 0);
    bool ok = true;
    for (int j = params.num_roots; j < params.nodes && ok; ++j) {
      std::vector<int> open;
      for (int i = 0; i < j; ++i)
        if (out_deg[i] < params.max_degree) open.push_back(i);
      if (open.empty()) {
        ok = false;
        break;
      }
      const int want = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.max_degree)));
      const int k = std::min<int>(want, static_cast<int>(open.size()));
      for (int c = 0; c < k; ++c) {
        const size_t pick = c + rng.below(open.size() - c);
        std::swap(open[c], open[pick]);
      }
      std::vector<int> parents(open.begin(), open.begin() + k);
      std::sort(parents.begin(), parents.end());
      for (int p : parents) {
        g.edges.push_back({p, j, params.beta});
        ++out_deg[p];
      }
    }
    if (!ok) continue;
    std::sort(g.edges.begin(), g.edges.end(), [](const Exploit& x, const Exploit& y) {
      return std::tie(x.from, x.to) < std::tie(y.from, y.to);
    });
    g.node_values.assign(params.intents, std::vector<double>(params.nodes, 0.0));
    for (auto& row : g.node_values) {
      double total = 0.0;
      for (int i = params.num_roots; i < params.nodes; ++i) {
        row[i] = std::pow(rng.uniform(), params.value_exponent);
        total += row[i];
      }
      for (int i = params.num_roots; i < params.nodes; ++i) {
        row[i] = total > 0.0 ? row[i] / total : 1.0 / (params.nodes - params.num_roots);
      }
    }
    return g;
  }
  throw GenerationFailure("degree caps unsatisfiable after " +
                          std::to_string(params.max_retries) + " attempts");
}

GameSpec compile_attack_game(const AttackGraph& g, const CompileOptions& options) {
  if (auto issues = check_attack_graph(g); !issues.empty()) {
    throw ConfigError("attack graph: " + issues.front());
  }
  const int k = static_cast<int>(g.node_values.size());
  if (k == 0) throw ConfigError("attack graph has no intents");
  GameSpec spec;
  for (int th = 0; th < k; ++th) spec.intents.push_back("theta" + std::to_string(th));
  spec.discount = 1.0;
  spec.horizon = options.horizon > 0 ? options.horizon : g.num_nodes;

  std::uint32_t root_mask = 0;
  for (int r : g.roots) root_mask |= 1u << r;
  std::map<std::uint32_t, int> index;
  std::vector<std::uint32_t> masks;
  std::deque<std::uint32_t> queue{root_mask};
  index[root_mask] = 0;
  masks.push_back(root_mask);

  while (!queue.empty()) {
    const std::uint32_t mask = queue.front();
    queue.pop_front();
    const int s = index[mask];
    if (static_cast<int>(spec.outcomes.size()) <= s) spec.outcomes.resize(s + 1);

    std::vector<int> frontier;
    for (size_t e = 0; e < g.edges.size(); ++e) {
      if ((mask >> g.edges[e].from & 1u) && !(mask >> g.edges[e].to & 1u)) {
        frontier.push_back(static_cast<int>(e));
      }
    }
    const auto attacks = bounded_subsets(frontier, frontier.empty() ? 0 : options.attacker_budget);
    const auto blocks = bounded_subsets(frontier, frontier.empty() ? 0 : options.defender_budget);
    std::vector<std::string> a_labels, d_labels;
    for (const auto& a : attacks) a_labels.push_back(action_label(a, ""));
    for (const auto& d : blocks) d_labels.push_back(action_label(d, "block:"));
    if (static_cast<int>(spec.attacker_actions.size()) <= s) {
      spec.attacker_actions.resize(s + 1);
      spec.defender_actions.resize(s + 1);
    }
    spec.attacker_actions[s] = a_labels;
    spec.defender_actions[s] = d_labels;

    auto& table = spec.outcomes[s];
    table.assign(attacks.size(), std::vector<std::vector<Outcome>>(blocks.size()));
    for (size_t ai = 0; ai < attacks.size(); ++ai) {
      for (size_t di = 0; di < blocks.size(); ++di) {
        const auto& a = attacks[ai];
        const auto& d = blocks[di];
        std::vector<int> tried;
        for (int e : a)
          if (std::find(d.begin(), d.end(), e) == d.end()) tried.push_back(e);
        const double cost = -g.attack_cost * static_cast<double>(a.size()) +
                            g.defense_cost * static_cast<double>(d.size());
        std::map<std::uint32_t, double> by_next;
        for (std::uint32_t bits = 0; bits < (1u << tried.size()); ++bits) {
          double p = 1.0;
          std::uint32_t next = mask;
          for (size_t i = 0; i < tried.size(); ++i) {
            const auto& ex = g.edges[tried[i]];
            if (bits >> i & 1u) {
              p *= ex.beta;
              next |= 1u << ex.to;
            } else {
              p *= 1.0 - ex.beta;
            }
          }
          if (p > 0.0) by_next[next] += p;
        }
        for (const auto& [next, p] : by_next) {
          auto [it, fresh] = index.try_emplace(next, static_cast<int>(masks.size()));
          if (fresh) {
            masks.push_back(next);
            queue.push_back(next);
            if (static_cast<int>(masks.size()) > options.state_cap) {
              throw StateExplosion("attack game exceeds " + std::to_string(options.state_cap) + " states");
            }
          }
          Outcome o{it->second, p, std::vector<double>(k, cost)};
          for (int node = 0; node < g.num_nodes; ++node) {
            if ((next >> node & 1u) && !(mask >> node & 1u)) {
              for (int th = 0; th < k; ++th) o.reward[th] += g.node_values[th][node];
            }
          }
          table[ai][di].push_back(std::move(o));
        }
      }
    }
  }

  for (auto m : masks) spec.states.push_back(mask_label(m, g.num_nodes));
  spec.prior.assign(masks.size(), std::vector<double>(k, 0.0));
  for (int th = 0; th < k; ++th) spec.prior[0][th] = 1.0 / k;
  spec.refresh_reward_bound();
  return spec;
}

std::vector<std::uint32_t> attack_state_masks(const GameSpec& spec) {
  std::vector<std::uint32_t> out;
  for (const auto& label : spec.states) {
    std::uint32_t mask = 0;
    std::string digits;
    for (char c : label) {
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
      } else if (!digits.empty()) {
        mask |= 1u << std::stoi(digits);
        digits.clear();
      }
    }
    out.push_back(mask);
  }
  return out;
}

GameSpec patrolling_game() {
  GameSpec spec;
  const char* loc = "mg";
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) spec.states.push_back(std::string("(") + loc[x] + "," + loc[y] + ")");
  spec.intents = {"1/3", "2/3"};
  const double theta[2] = {1.0 / 3.0, 2.0 / 3.0};
  auto reward = [&](int s, int th) {
    const double t = theta[th];
    switch (s) {
      case 0: return t / 2.0;
      case 1: return t;
      case 2: return 1.0 - t;
      default: return (1.0 - t) / 2.0;
    }
  };
  spec.attacker_actions.assign(4, {"stay", "switch"});
  spec.defender_actions.assign(4, {"stay", "switch"});
  spec.outcomes.resize(4);
  for (int s = 0; s < 4; ++s) {
    spec.outcomes[s].assign(2, std::vector<std::vector<Outcome>>(2));
    const int x = s / 2;
    const int y = s % 2;
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d) {
        const int next = patrol_state(x ^ a, y ^ d);
        spec.outcomes[s][a][d] = {{next, 1.0, {reward(next, 0), reward(next, 1)}}};
      }
  }
  spec.prior.assign(4, {0.125, 0.125});
  spec.discount = 1.0;
  spec.horizon = 2;
  spec.refresh_reward_bound();
  return spec;
}

nlohmann::json to_json(const AttackGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back({e.from, e.to, e.beta});
  return {{"format", "ncirl-attack-graph/1"},
          {"nodes", g.num_nodes},
          {"roots", g.roots},
          {"edges", edges},
          {"node_values", g.node_values},
          {"attack_cost", g.attack_cost},
          {"defense_cost", g.defense_cost}};
}

AttackGraph attack_graph_from_json(const nlohmann::json& j) {
  try {
    AttackGraph g;
    g.num_nodes = j.at("nodes").get<int>();
    g.roots = j.at("roots").get<std::vector<int>>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw ConfigError("attack graph edge must be [from, to, beta]");
      g.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    g.node_values = j.at("node_values").get<std::vector<std::vector<double>>>();
    g.attack_cost = j.value("attack_cost", 0.01);
    g.defense_cost = j.value("defense_cost", 0.01);
    if (auto issues = check_attack_graph(g); !issues.empty()) {
      throw ConfigError("attack graph: " + issues.front());
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("attack graph: ") + e.what());
  }
}

std::string to_dot(const AttackGraph& g) {
  std::ostringstream os;
  os << "digraph attack_graph {\n  rankdir=LR;\n";
  for (int i = 0; i < g.num_nodes; ++i) {
    const bool root = std::find(g.roots.begin(), g.roots.end(), i) != g.roots.end();
    os << "  n" << i << " [label=\"" << i << "\"" << (root ? ", shape=doublecircle" : ", shape=circle")
       << "];\n";
  }
  for (size_t e = 0; e < g.edges.size(); ++e) {
    os << "  n" << g.edges[e].from << " -> n" << g.edges[e].to << " [label=\"e" << e << " ("
       << g.edges[e].beta << ")\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ncirl
