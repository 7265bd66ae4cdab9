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

#include "ncirl/benchmark.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <set>
#include <thread>

#include "ncirl/agents.hpp"
#include "ncirl/errors.hpp"
#include "ncirl/rng.hpp"
#include "ncirl/sim.hpp"

namespace ncirl {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Instance {
  int size;
  int seed;
};

struct InstanceOutcome {
  std::vector<BenchRow> rows;
  std::string failure;
  double solve_seconds = 0.0;
};

// Attacker reward of one arm, evaluated exactly or by Monte Carlo.
template <class MakeAttacker, class MakeDefender>
double evaluate_arm(const GameSpec& spec, int theta, int horizon, const BenchConfig& cfg,
                    std::uint64_t instance_seed, MakeAttacker make_attacker,
                    MakeDefender make_defender) {
  if (cfg.evaluation == Evaluation::kExpected) {
    double mass = 0.0;
    double total = 0.0;
    for (int s = 0; s < spec.num_states(); ++s) {
      const double w = spec.prior[s][theta];
      if (!(w > 0.0)) continue;
      auto att = make_attacker(s);
      auto def = make_defender(s);
      total += w * expected_reward(spec, *att, *def, theta, horizon).total;
      mass += w;
    }
    return total / mass;
  }
  double total = 0.0;
  for (int r = 0; r < cfg.rollouts; ++r) {
    const std::uint64_t rseed = splitmix(instance_seed ^ (0x51ed270b27a3ULL + static_cast<std::uint64_t>(r)));
    Rng rng(rseed);
    const int s0 = sample_initial_state(spec, theta, rng);
    auto att = make_attacker(s0);
    auto def = make_defender(s0);
    total += rollout(spec, *att, *def, theta, horizon, rng.next()).total_reward;
  }
  return total / cfg.rollouts;
}

InstanceOutcome run_instance(const BenchConfig& cfg, const Instance& inst) {
  InstanceOutcome out;
  const std::uint64_t iseed = splitmix(cfg.base_seed ^ splitmix(static_cast<std::uint64_t>(inst.size) << 32 |
                                                                 static_cast<std::uint64_t>(inst.seed)));
  try {
    GameSpec game;
    std::vector<double> normalizer;
    int horizon = 0;
    if (cfg.environment == BenchEnvironment::kPatrolling) {
      game = patrolling_game();
      horizon = cfg.horizon > 0 ? cfg.horizon : *game.horizon;
      game.horizon = horizon;
      normalizer.assign(game.num_intents(), 1.0);
    } else {
      GraphGenParams gp = cfg.graph;
      gp.nodes = inst.size;
      gp.seed = iseed;
      const auto graph = generate_attack_graph(gp);
      CompileOptions co = cfg.compile;
      co.horizon = cfg.horizon > 0 ? cfg.horizon : inst.size;
      horizon = co.horizon;
      game = compile_attack_game(graph, co);
      for (const auto& row : graph.node_values) {
        double sum = 0.0;
        for (double v : row) sum += v;
        normalizer.push_back(sum > 0.0 ? sum : 1.0);
      }
    }
    const int k = game.num_intents();
    Rng pick(splitmix(iseed ^ 0x7417ULL));
    const int true_theta = cfg.fixed_true_theta ? *cfg.fixed_true_theta : static_cast<int>(pick.below(k));
    const int inferred_theta =
        cfg.fixed_inferred_theta ? *cfg.fixed_inferred_theta : static_cast<int>(pick.below(k));
    if (true_theta < 0 || true_theta >= k || inferred_theta < 0 || inferred_theta >= k) {
      throw ConfigError("fixed intent index out of range");
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto policies = run_ncpbvi(game, cfg.solver);
    out.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto spec = std::make_shared<const GameSpec>(game);
    auto primal = std::make_shared<const PrimalValueSet>(policies.primal);
    auto dual = std::make_shared<const DualValueSet>(policies.dual);
    const auto backup = cfg.solver.backup;

    const double ncirl = evaluate_arm(
        game, true_theta, horizon, cfg, iseed,
        [&](int s) {
          auto a = std::make_unique<NcirlAttacker>(spec, primal, backup, true_theta);
          a->reset(s, policies.initial_beliefs.at(s));
          return a;
        },
        [&](int s) {
          auto d = std::make_unique<NcirlDefender>(spec, dual, backup);
          d->reset(s, policies.initial_zetas.at(s));
          return d;
        });
    auto att_policy = std::make_shared<const EquilibriumPolicy>(game, true_theta, true);
    auto def_policy = std::make_shared<const EquilibriumPolicy>(game, inferred_theta, false);
    const double mairl = evaluate_arm(
        game, true_theta, horizon, cfg, iseed,
        [&](int s) {
          auto a = std::make_unique<EquilibriumAttacker>(att_policy);
          a->reset(s);
          return a;
        },
        [&](int s) {
          auto d = std::make_unique<EquilibriumDefender>(def_policy);
          d->reset(s);
          return d;
        });

    BenchRow base;
    base.size = inst.size;
    base.seed = inst.seed;
    base.instance_seed = iseed;
    base.true_theta = true_theta;
    base.states = game.num_states();
    base.lower_bound = policies.lower_bound;
    base.upper_bound = policies.upper_bound;
    BenchRow n = base;
    n.method = "ncirl";
    n.reward = ncirl / normalizer[true_theta];
    BenchRow m = base;
    m.method = "mairl";
    m.inferred_theta = inferred_theta;
    m.reward = mairl / normalizer[true_theta];
    out.rows = {n, m};
  } catch (const Error& e) {
    out.failure = "size " + std::to_string(inst.size) + " seed " + std::to_string(inst.seed) + ": " + e.what();
  }
  return out;
}

MethodStats stats_of(const std::vector<double>& xs) {
  MethodStats s;
  s.count = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= s.count;
  if (s.count > 1) {
    double var = 0.0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    var /= s.count - 1;
    s.stderr_ = std::sqrt(var / s.count);
  }
  return s;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

SolverConfig benchmark_solver_defaults() {
  SolverConfig c;
  c.expansions = 2;
  c.sweeps = 3;
  c.expand.insert.cap = 20;
  c.expand.max_per_point = 1;
  return c;
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> kKeys = {
      "environment", "sizes", "seeds", "base_seed", "horizon", "rollouts", "evaluation", "solver",
      "graph", "budgets", "true_theta", "inferred_theta", "jobs"};
  static const std::set<std::string> kGraphKeys = {
      "beta", "intents", "roots", "max_degree", "attack_cost", "defense_cost", "value_exponent"};
  static const std::set<std::string> kBudgetKeys = {"attacker", "defender", "state_cap"};
  auto check_keys = [](const nlohmann::json& obj, const std::set<std::string>& keys, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : obj.items())
      if (!keys.count(key)) throw ConfigError(where + ": unknown key " + key);
  };
  check_keys(j, kKeys, "benchmark config");
  if (j.contains("graph")) check_keys(j["graph"], kGraphKeys, "graph");
  if (j.contains("budgets")) check_keys(j["budgets"], kBudgetKeys, "budgets");
  BenchConfig c;
  try {
    const std::string env = j.value("environment", std::string("attack_graph"));
    if (env == "attack_graph") c.environment = BenchEnvironment::kAttackGraph;
    else if (env == "patrolling") c.environment = BenchEnvironment::kPatrolling;
    else throw ConfigError("environment must be attack_graph or patrolling");
    if (c.environment == BenchEnvironment::kPatrolling) c.evaluation = Evaluation::kExpected;
    c.sizes = j.value("sizes", c.sizes);
    c.seeds = j.value("seeds", c.seeds);
    c.base_seed = j.value("base_seed", c.base_seed);
    c.horizon = j.value("horizon", c.horizon);
    c.rollouts = j.value("rollouts", c.rollouts);
    if (j.contains("evaluation")) {
      const std::string ev = j["evaluation"].get<std::string>();
      if (ev == "expected") c.evaluation = Evaluation::kExpected;
      else if (ev == "monte_carlo") c.evaluation = Evaluation::kMonteCarlo;
      else throw ConfigError("evaluation must be expected or monte_carlo");
    }
    if (j.contains("solver")) c.solver = solver_config_from_json(j["solver"], c.solver);
    if (j.contains("graph")) {
      const auto& g = j["graph"];
      c.graph.beta = g.value("beta", c.graph.beta);
      c.graph.intents = g.value("intents", c.graph.intents);
      c.graph.num_roots = g.value("roots", c.graph.num_roots);
      c.graph.max_degree = g.value("max_degree", c.graph.max_degree);
      c.graph.attack_cost = g.value("attack_cost", c.graph.attack_cost);
      c.graph.defense_cost = g.value("defense_cost", c.graph.defense_cost);
      c.graph.value_exponent = g.value("value_exponent", c.graph.value_exponent);
    }
    if (j.contains("budgets")) {
      const auto& b = j["budgets"];
      c.compile.attacker_budget = b.value("attacker", c.compile.attacker_budget);
      c.compile.defender_budget = b.value("defender", c.compile.defender_budget);
      c.compile.state_cap = b.value("state_cap", c.compile.state_cap);
    }
    if (j.contains("true_theta") && !j["true_theta"].is_null()) c.fixed_true_theta = j["true_theta"].get<int>();
    if (j.contains("inferred_theta") && !j["inferred_theta"].is_null()) {
      c.fixed_inferred_theta = j["inferred_theta"].get<int>();
    }
    c.jobs = j.value("jobs", c.jobs);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("benchmark config: ") + e.what());
  }
  if (c.sizes.empty()) throw ConfigError("sizes must be nonempty");
  for (int n : c.sizes)
    if (n < 2 || n > 31) throw ConfigError("graph sizes must lie in [2, 31]");
  if (c.seeds < 1) throw ConfigError("seeds must be positive");
  if (c.rollouts < 1) throw ConfigError("rollouts must be positive");
  if (c.jobs < 1) throw ConfigError("jobs must be positive");
  if (c.horizon < 0) throw ConfigError("horizon must be nonnegative");
  if (c.graph.intents < 1) throw ConfigError("intents must be positive");
  if (!(c.graph.beta >= 0.0 && c.graph.beta <= 1.0)) throw ConfigError("beta must lie in [0,1]");
  if (!(c.graph.value_exponent > 0.0)) throw ConfigError("value_exponent must be positive");
  if (c.compile.attacker_budget < 1 || c.compile.defender_budget < 1 || c.compile.state_cap < 1) {
    throw ConfigError("budgets and state_cap must be positive");
  }
  if (c.graph.max_degree < 1 || c.graph.num_roots < 1) throw ConfigError("max_degree and roots must be positive");
  const int intents = c.environment == BenchEnvironment::kPatrolling ? 2 : c.graph.intents;
  for (const auto& theta : {c.fixed_true_theta, c.fixed_inferred_theta}) {
    if (theta && (*theta < 0 || *theta >= intents)) throw ConfigError("fixed intent out of range");
  }
  return c;
}

nlohmann::json to_json(const BenchConfig& c) {
  nlohmann::json j{
      {"environment", c.environment == BenchEnvironment::kPatrolling ? "patrolling" : "attack_graph"},
      {"sizes", c.sizes},
      {"seeds", c.seeds},
      {"base_seed", c.base_seed},
      {"horizon", c.horizon},
      {"rollouts", c.rollouts},
      {"evaluation", c.evaluation == Evaluation::kExpected ? "expected" : "monte_carlo"},
      {"solver", to_json(c.solver)},
      {"graph",
       {{"beta", c.graph.beta},
        {"intents", c.graph.intents},
        {"roots", c.graph.num_roots},
        {"max_degree", c.graph.max_degree},
        {"attack_cost", c.graph.attack_cost},
        {"defense_cost", c.graph.defense_cost},
        {"value_exponent", c.graph.value_exponent}}},
      {"budgets",
       {{"attacker", c.compile.attacker_budget},
        {"defender", c.compile.defender_budget},
        {"state_cap", c.compile.state_cap}}},
      {"jobs", c.jobs},
  };
  j["true_theta"] = c.fixed_true_theta ? nlohmann::json(*c.fixed_true_theta) : nlohmann::json();
  j["inferred_theta"] = c.fixed_inferred_theta ? nlohmann::json(*c.fixed_inferred_theta) : nlohmann::json();
  return j;
}

BenchmarkResult run_benchmark(const BenchConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Instance> instances;
  const std::vector<int> sizes =
      config.environment == BenchEnvironment::kPatrolling ? std::vector<int>{2} : config.sizes;
  for (int n : sizes)
    for (int s = 0; s < config.seeds; ++s) instances.push_back({n, s});

  std::vector<InstanceOutcome> outcomes(instances.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < instances.size(); i = next++) outcomes[i] = run_instance(config, instances[i]);
  };
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(instances.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchmarkResult result;
  for (int n : sizes) {
    SizeSummary sum;
    sum.size = n;
    std::vector<double> nc, ma;
    double seconds = 0.0;
    int solved = 0;
    for (size_t i = 0; i < instances.size(); ++i) {
      if (instances[i].size != n) continue;
      const auto& o = outcomes[i];
      if (!o.failure.empty()) {
        ++sum.failures;
        result.failures.push_back(o.failure);
        continue;
      }
      seconds += o.solve_seconds;
      ++solved;
      for (const auto& row : o.rows) {
        (row.method == "ncirl" ? nc : ma).push_back(row.reward);
        result.rows.push_back(row);
      }
    }
    sum.ncirl = stats_of(nc);
    sum.mairl = stats_of(ma);
    sum.relative_reduction = sum.mairl.mean != 0.0 ? (sum.mairl.mean - sum.ncirl.mean) / sum.mairl.mean : 0.0;
    sum.mean_solve_seconds = solved ? seconds / solved : 0.0;
    result.summary.push_back(sum);
  }
  result.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::string to_csv(const BenchmarkResult& result) {
  std::string out =
      "size,seed,instance_seed,method,true_theta,inferred_theta,states,normalized_reward,"
      "lower_bound,upper_bound\n";
  for (const auto& r : result.rows) {
    out += std::to_string(r.size) + "," + std::to_string(r.seed) + "," + std::to_string(r.instance_seed) +
           "," + r.method + "," + std::to_string(r.true_theta) + "," +
           (r.inferred_theta >= 0 ? std::to_string(r.inferred_theta) : std::string()) + "," +
           std::to_string(r.states) + "," + fmt(r.reward) + "," + fmt(r.lower_bound) + "," +
           fmt(r.upper_bound) + "\n";
  }
  return out;
}

nlohmann::json summary_json(const BenchmarkResult& result, const BenchConfig& config) {
  nlohmann::json sizes = nlohmann::json::array();
  auto method = [](const MethodStats& m) {
    return nlohmann::json{{"mean", m.mean}, {"stderr", m.stderr_}, {"count", m.count}};
  };
  for (const auto& s : result.summary) {
    sizes.push_back({{"size", s.size},
                     {"ncirl", method(s.ncirl)},
                     {"mairl", method(s.mairl)},
                     {"relative_reduction", s.relative_reduction},
                     {"failures", s.failures},
                     {"mean_solve_seconds", s.mean_solve_seconds}});
  }
  return {{"format", "ncirl-benchmark-summary/1"},
          {"config", to_json(config)},
          {"sizes", sizes},
          {"failures", result.failures},
          {"total_seconds", result.total_seconds}};
}

}  // namespace ncirl
