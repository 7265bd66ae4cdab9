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

#include "ncirl/ncpbvi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ncirl/dual.hpp"
#include "ncirl/lp.hpp"
#include "ncirl/primal.hpp"

namespace ncirl {
namespace {

constexpr const char* kCheckpointFormat = "ncirl-checkpoint/1";

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

void seed_primal(PrimalValueSet& sets,
                 const std::vector<double>& b0, const InsertPolicy& insert) {
  for (int t = 0; t < sets.num_stages(); ++t)
    for (int s = 0; s < sets.num_states(); ++s) {
      if (!sets.is_active(t, s)) continue;
      auto& set = sets.at(t, s);
      insert_point(set, {b0, dot(set.corners, b0)}, insert);
    }
}

void compute_initial_states(const GameSpec& spec, const SolverConfig& config,
                            SolvedPolicies& out) {
  const int n = spec.num_states();
  out.initial_beliefs.assign(n, {});
  for (int s = 0; s < n; ++s) {
    double mass = 0.0;
    for (double p : spec.prior[s]) mass += p;
    if (mass <= 0.0) continue;
    if (config.initial_belief) {
      out.initial_beliefs[s] = *config.initial_belief;
    } else {
      for (double p : spec.prior[s]) out.initial_beliefs[s].push_back(p / mass);
    }
  }
}

void compute_bounds(const GameSpec& spec, SolvedPolicies& out) {
  const auto marginal = spec.state_marginal();
  out.lower_bound = 0.0;
  out.upper_bound = 0.0;
  out.initial_zetas.assign(spec.num_states(), {});
  for (int s = 0; s < spec.num_states(); ++s) {
    if (out.initial_beliefs[s].empty()) continue;
    const auto& b = out.initial_beliefs[s];
    out.lower_bound += marginal[s] * solve_pa(spec, out.primal, 0, s, b, out.config.backup).value;
    out.initial_zetas[s] = select_initial_zeta(out.dual, s, b);
    const double w = solve_pd(spec, out.dual, 0, s, out.initial_zetas[s], out.config.backup).value;
    out.upper_bound += marginal[s] * (w - dot(b, out.initial_zetas[s]));
  }
}

template <class Sets, class Update>
void run_sweeps(const GameSpec& spec, Sets& sets, const SolverConfig& config,
                Update update, std::vector<double>& deltas) {
  for (int k = 0; k < config.sweeps; ++k) {
    const auto stats = update(spec, sets, config.backup);
    deltas.push_back(stats.max_delta);
    if (stats.max_delta < config.sweep_tol) break;
  }
}

nlohmann::json vec2(const std::vector<std::vector<double>>& v) { return v; }

}  // namespace

nlohmann::json to_json(const SolverConfig& c) {
  nlohmann::json j{
      {"expansions", c.expansions},
      {"sweeps", c.sweeps},
      {"sweep_tol", c.sweep_tol},
      {"bound", c.backup.bound == BoundForm::kHull ? "hull" : "sawtooth"},
      {"lp_tol", c.backup.lp.tol},
      {"lp_max_iterations", c.backup.lp.max_iterations},
      {"eps_dup", c.expand.insert.eps_dup},
      {"cap", c.expand.insert.cap},
      {"expansion_distance",
       c.expand.distance == ExpansionDistance::kFromOrigin ? "origin" : "nearest"},
      {"dual_insertions_per_point", c.expand.max_per_point},
      {"seed_dual", c.seed_dual},
  };
  j["initial_belief"] = c.initial_belief ? nlohmann::json(*c.initial_belief) : nlohmann::json();
  return j;
}

SolverConfig solver_config_from_json(const nlohmann::json& j, const SolverConfig& base) {
  static const std::set<std::string> kKeys = {
      "expansions", "sweeps", "sweep_tol", "bound", "lp_tol", "lp_max_iterations", "eps_dup", "cap",
      "expansion_distance", "dual_insertions_per_point", "seed_dual", "initial_belief"};
  if (!j.is_object()) throw ConfigError("solver config must be an object");
  for (const auto& [key, value] : j.items())
    if (!kKeys.count(key)) throw ConfigError("solver config: unknown key " + key);
  SolverConfig c = base;
  try {
    c.expansions = j.value("expansions", c.expansions);
    c.sweeps = j.value("sweeps", c.sweeps);
    c.sweep_tol = j.value("sweep_tol", c.sweep_tol);
    const std::string bound =
        j.value("bound", std::string(c.backup.bound == BoundForm::kHull ? "hull" : "sawtooth"));
    if (bound == "hull") c.backup.bound = BoundForm::kHull;
    else if (bound == "sawtooth") c.backup.bound = BoundForm::kSawtooth;
    else throw ConfigError("bound must be hull or sawtooth");
    c.backup.lp.tol = j.value("lp_tol", c.backup.lp.tol);
    c.backup.lp.max_iterations = j.value("lp_max_iterations", c.backup.lp.max_iterations);
    c.expand.insert.eps_dup = j.value("eps_dup", c.expand.insert.eps_dup);
    c.expand.insert.cap = j.value("cap", c.expand.insert.cap);
    const std::string dist = j.value(
        "expansion_distance",
        std::string(c.expand.distance == ExpansionDistance::kFromOrigin ? "origin" : "nearest"));
    if (dist == "origin") c.expand.distance = ExpansionDistance::kFromOrigin;
    else if (dist == "nearest") c.expand.distance = ExpansionDistance::kFromNearestStored;
    else throw ConfigError("expansion_distance must be origin or nearest");
    c.expand.max_per_point = j.value("dual_insertions_per_point", c.expand.max_per_point);
    c.seed_dual = j.value("seed_dual", c.seed_dual);
    if (j.contains("initial_belief") && !j["initial_belief"].is_null()) {
      c.initial_belief = j["initial_belief"].get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("solver config: ") + e.what());
  }
  if (c.expansions < 1 || c.sweeps < 1) throw ConfigError("N and T must be at least 1");
  if (c.expand.insert.cap < 1) throw ConfigError("cap must be positive");
  if (c.backup.lp.max_iterations < 1) throw ConfigError("lp_max_iterations must be positive");
  if (c.expand.max_per_point < 1) throw ConfigError("dual_insertions_per_point must be positive");
  if (!(c.sweep_tol >= 0.0) || !(c.backup.lp.tol > 0.0) || !(c.expand.insert.eps_dup >= 0.0)) {
    throw ConfigError("tolerances must be nonnegative");
  }
  return c;
}

nlohmann::json to_json(const SolvedPolicies& p) {
  return {
      {"config", to_json(p.config)},
      {"primal", to_json(p.primal)},
      {"dual", to_json(p.dual)},
      {"initial_beliefs", vec2(p.initial_beliefs)},
      {"initial_zetas", vec2(p.initial_zetas)},
      {"lower_bound", p.lower_bound},
      {"upper_bound", p.upper_bound},
      {"diagnostics",
       {{"primal_sweep_deltas", vec2(p.diagnostics.primal_sweep_deltas)},
        {"dual_sweep_deltas", vec2(p.diagnostics.dual_sweep_deltas)},
        {"primal_set_sizes", p.diagnostics.primal_set_sizes},
        {"dual_set_sizes", p.diagnostics.dual_set_sizes},
        {"lp_solves", p.diagnostics.lp_solves}}},
  };
}

SolvedPolicies solved_policies_from_json(const nlohmann::json& j) {
  SolvedPolicies p;
  try {
    p.config = solver_config_from_json(j.at("config"));
    p.primal = primal_sets_from_json(j.at("primal"));
    p.dual = dual_sets_from_json(j.at("dual"));
    p.initial_beliefs = j.at("initial_beliefs").get<std::vector<std::vector<double>>>();
    p.initial_zetas = j.at("initial_zetas").get<std::vector<std::vector<double>>>();
    p.lower_bound = j.value("lower_bound", 0.0);
    p.upper_bound = j.value("upper_bound", 0.0);
    const auto& d = j.at("diagnostics");
    p.diagnostics.primal_sweep_deltas = d.at("primal_sweep_deltas").get<std::vector<std::vector<double>>>();
    p.diagnostics.dual_sweep_deltas = d.at("dual_sweep_deltas").get<std::vector<std::vector<double>>>();
    p.diagnostics.primal_set_sizes = d.at("primal_set_sizes").get<std::vector<size_t>>();
    p.diagnostics.dual_set_sizes = d.at("dual_set_sizes").get<std::vector<size_t>>();
    p.diagnostics.lp_solves = d.at("lp_solves").get<long long>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("policies: ") + e.what());
  }
  return p;
}

nlohmann::json to_json(const Checkpoint& c) {
  return {{"format", kCheckpointFormat},
          {"policies", to_json(c.partial)},
          {"primal_rounds", c.primal_rounds},
          {"dual_rounds", c.dual_rounds},
          {"primal_closed", c.primal_closed}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  if (j.value("format", std::string()) != kCheckpointFormat) {
    throw ConfigError("not an ncirl checkpoint");
  }
  Checkpoint c;
  c.partial = solved_policies_from_json(j.at("policies"));
  c.primal_rounds = j.at("primal_rounds").get<int>();
  c.dual_rounds = j.at("dual_rounds").get<int>();
  c.primal_closed = j.at("primal_closed").get<bool>();
  return c;
}

SolvedPolicies run_ncpbvi(const GameSpec& spec, const SolverConfig& config,
                          const Checkpoint* resume) {
  if (auto v = validate_game(spec); !v.empty()) {
    throw ConfigError("invalid game at " + v.front().location + ": " + v.front().message);
  }
  if (config.expansions < 1 || config.sweeps < 1) {
    throw ConfigError("N and T must be at least 1");
  }
  const long long init_before = lp::solve_count();
  Checkpoint cp;
  if (resume) {
    cp = *resume;
    cp.partial.config = config;
  } else {
    cp.partial.config = config;
    compute_initial_states(spec, config, cp.partial);
    cp.partial.primal = initial_primal_sets(spec);
    cp.partial.dual = initial_dual_sets(spec);
    // Checkpoints taken before the first round must still count these solves.
    cp.partial.diagnostics.lp_solves = lp::solve_count() - init_before;
  }
  SolvedPolicies& out = cp.partial;
  Diagnostics& diag = out.diagnostics;
  const long long solves_resumed = diag.lp_solves;
  const long long solves_before = lp::solve_count();
  if (config.initial_belief &&
      static_cast<int>(config.initial_belief->size()) != spec.num_intents()) {
    throw ConfigError("initial belief dimension differs from |Theta|");
  }

  Checkpoint good = cp;
  auto snapshot = [&] {
    good = cp;
    good.partial.diagnostics.lp_solves = solves_resumed + (lp::solve_count() - solves_before);
  };
  try {
    if (cp.primal_rounds == 0 && !cp.primal_closed) {
      for (const auto& b : out.initial_beliefs) {
        if (!b.empty()) seed_primal(out.primal, b, config.expand.insert);
      }
    }
    for (; cp.primal_rounds < config.expansions && !cp.primal_closed; ++cp.primal_rounds) {
      diag.primal_sweep_deltas.emplace_back();
      run_sweeps(spec, out.primal, config, update_a, diag.primal_sweep_deltas.back());
      expand_a(spec, out.primal, config.backup, config.expand);
      diag.primal_set_sizes.push_back(out.primal.total_points());
      snapshot();
      good.primal_rounds = cp.primal_rounds + 1;
    }
    if (!cp.primal_closed) {
      diag.primal_sweep_deltas.emplace_back();
      run_sweeps(spec, out.primal, config, update_a, diag.primal_sweep_deltas.back());
      cp.primal_closed = true;
      if (config.seed_dual) {
        seed_dual_from_primal(spec, out.primal, out.dual, config.backup, config.expand.insert);
      }
      snapshot();
    }
    for (; cp.dual_rounds < config.expansions; ++cp.dual_rounds) {
      diag.dual_sweep_deltas.emplace_back();
      run_sweeps(spec, out.dual, config, update_d, diag.dual_sweep_deltas.back());
      expand_d(spec, out.dual, config.backup, config.expand);
      diag.dual_set_sizes.push_back(out.dual.total_points());
      snapshot();
      good.dual_rounds = cp.dual_rounds + 1;
    }
    diag.dual_sweep_deltas.emplace_back();
    run_sweeps(spec, out.dual, config, update_d, diag.dual_sweep_deltas.back());
    compute_bounds(spec, out);
  } catch (const Error& e) {
    throw SolverInterrupted(e.what(), to_json(good));
  }
  diag.lp_solves = solves_resumed + (lp::solve_count() - solves_before);
  return out;
}

std::vector<double> select_initial_zeta(const DualValueSet& sets, int s0,
                                        std::span<const double> b0) {
  if (sets.num_stages() == 0 || s0 < 0 || s0 >= sets.num_states() || !sets.is_active(0, s0)) {
    throw EmptyCandidatePool("no dual points stored for the start state");
  }
  const auto& set = sets.at(0, s0);
  std::vector<double> best(b0.size(), 0.0);
  double best_obj = set.anchor;
  for (const auto& pt : set.points) {
    const double obj = pt.value - dot(b0, pt.coords);
    if (obj < best_obj - 1e-12 ||
        (obj <= best_obj + 1e-12 && pt.coords < best)) {
      best_obj = std::min(best_obj, obj);
      best = pt.coords;
    }
  }
  return best;
}

}  // namespace ncirl
