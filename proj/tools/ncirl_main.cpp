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

// ncirl: generate games, solve them, play them out and run the benchmark.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ncirl/agents.hpp"
#include "ncirl/benchmark.hpp"
#include "ncirl/environments.hpp"
#include "ncirl/errors.hpp"
#include "ncirl/game_io.hpp"
#include "ncirl/matrix_game.hpp"
#include "ncirl/ncpbvi.hpp"
#include "ncirl/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitNumerical = 4;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NCIRL_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ncirl::ConfigError("NCIRL_SEED must be an unsigned integer");
    return v;
  }
  return 0;
}

// Refuses to clobber an existing file unless --force was given.
void check_writable(const fs::path& p, bool force) {
  if (fs::exists(p) && !force) {
    throw ncirl::ConfigError(p.string() + " exists; pass --force to overwrite");
  }
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ncirl::ConfigError("cannot write " + p.string());
  out << text;
}

void write_json(const fs::path& p, const json& doc) { write_text(p, doc.dump(2) + "\n"); }

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  return ncirl::read_json_file(path);
}

int max_actions(const ncirl::GameSpec& g, bool attacker) {
  int m = 0;
  for (int s = 0; s < g.num_states(); ++s)
    m = std::max(m, attacker ? g.num_attacker_actions(s) : g.num_defender_actions(s));
  return m;
}

// ---- generate ------------------------------------------------------------

struct GenerateArgs {
  std::string env = "attack_graph";
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  int nodes = 6;
  std::optional<int> intents;
  std::optional<double> beta;
  int horizon = 0;
  bool force = false;
};

int cmd_generate(const GenerateArgs& a) {
  const fs::path dir(a.out);
  const fs::path game_path = dir / "game.json";
  ncirl::GameSpec game;
  if (a.env == "patrolling") {
    check_writable(game_path, a.force);
    game = ncirl::patrolling_game();
    write_json(game_path, ncirl::game_to_json(game));
  } else if (a.env == "attack_graph") {
    const fs::path graph_path = dir / "graph.json";
    check_writable(graph_path, a.force);
    check_writable(game_path, a.force);
    const json cfg = load_config(a.config);
    ncirl::GraphGenParams gp;
    ncirl::CompileOptions co;
    try {
      gp.nodes = cfg.value("nodes", a.nodes);
      gp.beta = cfg.value("beta", gp.beta);
      gp.intents = cfg.value("intents", gp.intents);
      gp.num_roots = cfg.value("roots", gp.num_roots);
      gp.max_degree = cfg.value("max_degree", gp.max_degree);
      gp.attack_cost = cfg.value("attack_cost", gp.attack_cost);
      gp.defense_cost = cfg.value("defense_cost", gp.defense_cost);
      gp.value_exponent = cfg.value("value_exponent", gp.value_exponent);
      co.attacker_budget = cfg.value("attacker_budget", co.attacker_budget);
      co.defender_budget = cfg.value("defender_budget", co.defender_budget);
      co.state_cap = cfg.value("state_cap", co.state_cap);
      co.horizon = cfg.value("horizon", a.horizon);
    } catch (const json::exception& e) {
      throw ncirl::ConfigError(std::string("generate config: ") + e.what());
    }
    if (a.intents) gp.intents = *a.intents;
    if (a.beta) gp.beta = *a.beta;
    gp.seed = a.seed ? *a.seed : (cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : resolve_seed({}));
    if (gp.nodes < 2) throw ncirl::ConfigError("graph size must be at least 2");
    if (!(gp.beta >= 0.0 && gp.beta <= 1.0)) throw ncirl::ConfigError("beta must lie in [0,1]");
    const auto graph = ncirl::generate_attack_graph(gp);
    game = ncirl::compile_attack_game(graph, co);
    write_json(graph_path, ncirl::to_json(graph));
    write_json(game_path, ncirl::game_to_json(game));
  } else {
    throw ncirl::ConfigError("unknown environment " + a.env);
  }
  std::printf("|S| = %d, |A| = %d, |D| = %d, |Theta| = %d\n", game.num_states(), max_actions(game, true),
              max_actions(game, false), game.num_intents());
  return kExitOk;
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
  std::string game;
  std::string config;
  std::string out = ".";
  std::string resume;
  bool force = false;
};

json corner_report(const ncirl::GameSpec& game, const ncirl::SolvedPolicies& p) {
  json states = json::array();
  std::vector<ncirl::ShapleyResult> exact;
  for (int k = 0; k < game.num_intents(); ++k) exact.push_back(ncirl::shapley_solve(ncirl::restrict_to_intent(game, k)));
  for (int s = 0; s < game.num_states(); ++s) {
    if (!p.primal.is_active(0, s)) continue;
    const auto& corners = p.primal.at(0, s).corners;
    std::vector<double> ref;
    for (int k = 0; k < game.num_intents(); ++k) ref.push_back(exact[k].values[0][s]);
    states.push_back({{"state", s}, {"corner_values", corners}, {"shapley_values", ref}});
  }
  return states;
}

int cmd_solve(const SolveArgs& a) {
  const fs::path dir(a.out);
  const fs::path policy_path = dir / "policies.json";
  const fs::path diag_path = dir / "diagnostics.json";
  const fs::path ckpt_path = dir / "checkpoint.json";
  check_writable(policy_path, a.force);
  check_writable(diag_path, a.force);
  const auto game = ncirl::load_game(a.game);
  const auto config = ncirl::solver_config_from_json(load_config(a.config));
  std::optional<ncirl::Checkpoint> resume;
  if (!a.resume.empty()) resume = ncirl::checkpoint_from_json(ncirl::read_json_file(a.resume));
  ncirl::SolvedPolicies p;
  try {
    p = ncirl::run_ncpbvi(game, config, resume ? &*resume : nullptr);
  } catch (const ncirl::SolverInterrupted& e) {
    write_json(ckpt_path, e.checkpoint());
    std::fprintf(stderr, "solver interrupted: %s\ncheckpoint written to %s\n", e.what(), ckpt_path.string().c_str());
    return kExitNumerical;
  }
  write_json(policy_path, ncirl::to_json(p));
  json diag = ncirl::to_json(p).at("diagnostics");
  diag["lower_bound"] = p.lower_bound;
  diag["upper_bound"] = p.upper_bound;
  diag["corners"] = corner_report(game, p);
  write_json(diag_path, diag);
  std::printf("lower bound %.6f  upper bound %.6f  LP solves %lld\n", p.lower_bound, p.upper_bound,
              p.diagnostics.lp_solves);
  return kExitOk;
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string game;
  std::string policies;
  std::string attacker = "ncirl";
  std::string defender = "ncirl";
  int theta = 0;
  int inferred = 0;
  int horizon = 0;
  int rollouts = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool force = false;
};

json trace_json(const ncirl::RolloutTrace& t) {
  json stages = json::array();
  for (const auto& r : t.stages) {
    json st{{"state", r.state}, {"a", r.attacker_action}, {"d", r.defender_action}, {"next", r.next}, {"reward", r.reward}};
    if (!r.attacker_belief.empty()) st["belief"] = r.attacker_belief;
    if (!r.defender_zeta.empty()) st["zeta"] = r.defender_zeta;
    stages.push_back(st);
  }
  return {{"seed", t.seed}, {"true_theta", t.true_theta}, {"total_reward", t.total_reward}, {"stages", stages}};
}

int cmd_simulate(const SimulateArgs& a) {
  if (!a.out.empty()) check_writable(a.out, a.force);
  const auto game = ncirl::load_game(a.game);
  const int k = game.num_intents();
  if (a.theta < 0 || a.theta >= k || a.inferred < 0 || a.inferred >= k) {
    throw ncirl::ConfigError("intent index out of range");
  }
  if (a.rollouts < 1) throw ncirl::ConfigError("rollouts must be positive");
  const bool need_policies = a.attacker == "ncirl" || a.defender == "ncirl";
  if (a.attacker != "ncirl" && a.attacker != "equilibrium") throw ncirl::ConfigError("attacker must be ncirl or equilibrium");
  if (a.defender != "ncirl" && a.defender != "mairl") throw ncirl::ConfigError("defender must be ncirl or mairl");
  if (need_policies && a.policies.empty()) throw ncirl::ConfigError("--policies is required for ncirl agents");
  std::optional<ncirl::SolvedPolicies> pol;
  if (need_policies) pol = ncirl::solved_policies_from_json(ncirl::read_json_file(a.policies));
  const int horizon = a.horizon > 0 ? a.horizon : game.num_stages();

  auto spec = std::make_shared<const ncirl::GameSpec>(game);
  std::shared_ptr<const ncirl::PrimalValueSet> primal;
  std::shared_ptr<const ncirl::DualValueSet> dual;
  if (pol) {
    primal = std::make_shared<const ncirl::PrimalValueSet>(pol->primal);
    dual = std::make_shared<const ncirl::DualValueSet>(pol->dual);
  }
  auto att_policy = std::make_shared<const ncirl::EquilibriumPolicy>(game, a.theta, true);
  auto def_policy = std::make_shared<const ncirl::EquilibriumPolicy>(game, a.inferred, false);

  const std::uint64_t seed = resolve_seed(a.seed);
  json traces = json::array();
  double total = 0.0;
  for (int r = 0; r < a.rollouts; ++r) {
    ncirl::Rng rng(seed + static_cast<std::uint64_t>(r));
    const int s0 = ncirl::sample_initial_state(game, a.theta, rng);
    std::unique_ptr<ncirl::AttackerAgent> att;
    std::unique_ptr<ncirl::DefenderAgent> def;
    if (a.attacker == "ncirl") {
      auto x = std::make_unique<ncirl::NcirlAttacker>(spec, primal, pol->config.backup, a.theta);
      x->reset(s0, pol->initial_beliefs.at(s0));
      att = std::move(x);
    } else {
      auto x = std::make_unique<ncirl::EquilibriumAttacker>(att_policy);
      x->reset(s0);
      att = std::move(x);
    }
    if (a.defender == "ncirl") {
      auto x = std::make_unique<ncirl::NcirlDefender>(spec, dual, pol->config.backup);
      x->reset(s0, pol->initial_zetas.at(s0));
      def = std::move(x);
    } else {
      auto x = std::make_unique<ncirl::EquilibriumDefender>(def_policy);
      x->reset(s0);
      def = std::move(x);
    }
    const auto trace = ncirl::rollout(game, *att, *def, a.theta, horizon, rng.next());
    total += trace.total_reward;
    traces.push_back(trace_json(trace));
  }
  const json doc{{"format", "ncirl-traces/1"}, {"mean_reward", total / a.rollouts}, {"traces", traces}};
  if (a.out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_json(a.out, doc);
    std::printf("mean attacker reward %.6f over %d rollouts\n", total / a.rollouts, a.rollouts);
  }
  return kExitOk;
}

// ---- benchmark -----------------------------------------------------------

struct BenchmarkArgs {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool force = false;
};

int cmd_benchmark(const BenchmarkArgs& a) {
  const fs::path dir(a.out);
  const fs::path csv_path = dir / "results.csv";
  const fs::path summary_path = dir / "summary.json";
  check_writable(csv_path, a.force);
  check_writable(summary_path, a.force);
  json doc = load_config(a.config);
  if (!doc.is_object()) throw ncirl::ConfigError("benchmark config must be an object");
  if (!doc.contains("base_seed") || a.seed) doc["base_seed"] = resolve_seed(a.seed);
  if (a.jobs) doc["jobs"] = *a.jobs;
  const auto config = ncirl::bench_config_from_json(doc);
  const auto result = ncirl::run_benchmark(config);
  for (const auto& f : result.failures) std::fprintf(stderr, "instance failed: %s\n", f.c_str());
  write_text(csv_path, ncirl::to_csv(result));
  write_json(summary_path, ncirl::summary_json(result, config));
  for (const auto& s : result.summary) {
    std::printf("n=%d  N-CIRL %.4f +- %.4f  MA-IRL %.4f +- %.4f  reduction %.4f  failures %d\n", s.size,
                s.ncirl.mean, s.ncirl.stderr_, s.mairl.mean, s.mairl.stderr_, s.relative_reduction, s.failures);
  }
  return kExitOk;
}

// ---- export --------------------------------------------------------------

struct ExportArgs {
  std::string graph;
  std::string summary;
  std::string out;
  bool force = false;
};

// Long-format table of per-size means, one row per method.
std::string summary_table(const json& summary) {
  std::string out = "size,method,mean,stderr,count,relative_reduction\n";
  char buf[256];
  for (const auto& s : summary.at("sizes")) {
    for (const char* m : {"ncirl", "mairl"}) {
      const auto& st = s.at(m);
      std::snprintf(buf, sizeof buf, "%d,%s,%.12g,%.12g,%d,%.12g\n", s.at("size").get<int>(), m,
                    st.at("mean").get<double>(), st.at("stderr").get<double>(), st.at("count").get<int>(),
                    s.at("relative_reduction").get<double>());
      out += buf;
    }
  }
  return out;
}

int cmd_export(const ExportArgs& a) {
  if (a.graph.empty() == a.summary.empty()) throw ncirl::ConfigError("pass exactly one of --graph or --summary");
  std::string text;
  try {
    if (!a.graph.empty()) {
      text = ncirl::to_dot(ncirl::attack_graph_from_json(ncirl::read_json_file(a.graph)));
    } else {
      text = summary_table(ncirl::read_json_file(a.summary));
    }
  } catch (const json::exception& e) {
    throw ncirl::ConfigError(std::string("export: ") + e.what());
  }
  if (a.out.empty()) {
    std::cout << text;
  } else {
    check_writable(a.out, a.force);
    write_text(a.out, text);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and benchmark for zero-sum Markov games with one-sided intent information"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate an attack graph or the patrolling game");
  g->add_option("--env", gen.env, "attack_graph or patrolling")->capture_default_str();
  g->add_option("--config", gen.config, "JSON generation config");
  g->add_option("--out", gen.out, "Output directory")->capture_default_str();
  g->add_option("--seed", gen.seed, "Generator seed (falls back to NCIRL_SEED)");
  g->add_option("-n,--nodes", gen.nodes, "Graph size")->capture_default_str();
  g->add_option("--intents", gen.intents, "Number of intent parameters");
  g->add_option("--beta", gen.beta, "Exploit success probability");
  g->add_option("--horizon", gen.horizon, "Horizon; 0 uses the graph size")->capture_default_str();
  g->add_flag("--force", gen.force, "Overwrite existing files");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Run NC-PBVI on a game file");
  s->add_option("--game", sol.game, "Game JSON")->required();
  s->add_option("--config", sol.config, "Solver config JSON");
  s->add_option("--out", sol.out, "Output directory")->capture_default_str();
  s->add_option("--resume", sol.resume, "Checkpoint to continue from");
  s->add_flag("--force", sol.force, "Overwrite existing files");

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "Play rollouts between agents");
  m->add_option("--game", sim.game, "Game JSON")->required();
  m->add_option("--policies", sim.policies, "Solved policies JSON");
  m->add_option("--attacker", sim.attacker, "ncirl or equilibrium")->capture_default_str();
  m->add_option("--defender", sim.defender, "ncirl or mairl")->capture_default_str();
  m->add_option("--theta", sim.theta, "True intent index")->capture_default_str();
  m->add_option("--inferred-theta", sim.inferred, "Intent assumed by the mairl defender")->capture_default_str();
  m->add_option("--horizon", sim.horizon, "Stages; 0 uses the game horizon")->capture_default_str();
  m->add_option("--rollouts", sim.rollouts, "Number of rollouts")->capture_default_str();
  m->add_option("--seed", sim.seed, "Rollout seed (falls back to NCIRL_SEED)");
  m->add_option("--out", sim.out, "Trace file; stdout when omitted");
  m->add_flag("--force", sim.force, "Overwrite existing files");

  BenchmarkArgs bench;
  auto* b = app.add_subcommand("benchmark", "Compare N-CIRL and MA-IRL defenses");
  b->add_option("--config", bench.config, "Benchmark config JSON");
  b->add_option("--out", bench.out, "Output directory")->capture_default_str();
  b->add_option("--seed", bench.seed, "Base seed (falls back to NCIRL_SEED)");
  b->add_option("--jobs", bench.jobs, "Worker threads");
  b->add_flag("--force", bench.force, "Overwrite existing files");

  ExportArgs exp;
  auto* e = app.add_subcommand("export", "Export a graph as dot or a summary as CSV");
  e->add_option("--graph", exp.graph, "Attack graph JSON");
  e->add_option("--summary", exp.summary, "Benchmark summary JSON");
  e->add_option("--out", exp.out, "Output file; stdout when omitted");
  e->add_flag("--force", exp.force, "Overwrite existing files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (s->parsed()) return cmd_solve(sol);
    if (m->parsed()) return cmd_simulate(sim);
    if (b->parsed()) return cmd_benchmark(bench);
    if (e->parsed()) return cmd_export(exp);
  } catch (const ncirl::ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return kExitConfig;
  } catch (const ncirl::GenerationFailure& err) {
    std::fprintf(stderr, "generation failed: %s\n", err.what());
    return kExitGeneration;
  } catch (const ncirl::StateExplosion& err) {
    std::fprintf(stderr, "generation failed: %s\n", err.what());
    return kExitGeneration;
  } catch (const ncirl::Error& err) {
    std::fprintf(stderr, "numerical failure: %s\n", err.what());
    return kExitNumerical;
  } catch (const fs::filesystem_error& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return kExitConfig;
  }
  return kExitConfig;
}
