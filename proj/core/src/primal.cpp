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

#include "ncirl/primal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "internal/stage_data.hpp"
#include "ncirl/errors.hpp"
#include "ncirl/matrix_game.hpp"

namespace ncirl {
namespace {

constexpr double kMassTol = 1e-12;

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

std::vector<double> corner(int k, int theta) {
  std::vector<double> e(k, 0.0);
  e[theta] = 1.0;
  return e;
}

// Adds U <= bound(A(., a)) rows for one continuation, given the stored set.
void add_continuation_bound(lp::LpProblem& p, const PrimalStateSet& set,
                            const std::vector<int>& mass_vars, int u,
                            BoundForm form) {
  const int k = static_cast<int>(mass_vars.size());
  std::vector<lp::Term> corner_row{{u, 1.0}};
  for (int th = 0; th < k; ++th) corner_row.push_back({mass_vars[th], -set.corners[th]});

  if (form == BoundForm::kSawtooth) {
    p.add_constraint(corner_row, lp::Relation::kLessEqual, 0.0, "corner");
    for (const auto& pt : set.points) {
      const double excess = pt.value - dot(set.corners, pt.coords);
      if (excess <= 0.0) continue;
      for (int th = 0; th < k; ++th) {
        if (pt.coords[th] <= 0.0) continue;
        auto row = corner_row;
        row.push_back({mass_vars[th], -excess / pt.coords[th]});
        p.add_constraint(std::move(row), lp::Relation::kLessEqual, 0.0, "saw");
      }
    }
    return;
  }

  // Envelope with the corner weights eliminated: mass left over after the
  // interior weights is carried by the corners.
  std::vector<std::pair<int, const ValuePoint*>> alphas;
  for (const auto& pt : set.points) {
    const double excess = pt.value - dot(set.corners, pt.coords);
    if (excess <= 0.0) continue;
    alphas.emplace_back(p.add_variable(0.0), &pt);
    corner_row.push_back({alphas.back().first, -excess});
  }
  p.add_constraint(std::move(corner_row), lp::Relation::kLessEqual, 0.0, "hull");
  if (alphas.empty()) return;
  for (int th = 0; th < k; ++th) {
    std::vector<lp::Term> row{{mass_vars[th], -1.0}};
    for (const auto& [var, pt] : alphas) {
      if (pt->coords[th] != 0.0) row.push_back({var, pt->coords[th]});
    }
    p.add_constraint(std::move(row), lp::Relation::kLessEqual, 0.0, "mass");
  }
}

}  // namespace

double sawtooth_a(std::span<const double> corner_values,
                  const std::vector<ValuePoint>& points,
                  std::span<const double> b) {
  const double cb = dot(corner_values, b);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : points) {
    const double excess = pt.value - dot(corner_values, pt.coords);
    if (excess <= 0.0) continue;
    double phi = std::numeric_limits<double>::infinity();
    for (size_t th = 0; th < b.size(); ++th) {
      if (pt.coords[th] > 0.0) phi = std::min(phi, b[th] / pt.coords[th]);
    }
    best = std::min(best, cb + phi * excess);
  }
  return std::isfinite(best) ? best : cb;
}

lp::LpProblem build_pa(const GameSpec& spec, const PrimalValueSet& sets, int t,
                       int s, std::span<const double> b,
                       const BackupOptions& options, PaLayout* layout) {
  const int k = spec.num_intents();
  if (static_cast<int>(b.size()) != k || sets.num_intents != k) {
    throw std::invalid_argument("build_pa: belief dimension differs from |Theta|");
  }
  const auto sd = internal::stage_data(spec, s);
  const int ct = continuation_stage(spec, t);
  PaLayout local;
  PaLayout& lay = layout ? *layout : local;
  lay = PaLayout{};

  lp::LpProblem p(lp::Sense::kMaximize);
  lay.joint.assign(k, std::vector<int>(sd.na));
  for (int th = 0; th < k; ++th)
    for (int a = 0; a < sd.na; ++a)
      lay.joint[th][a] = p.add_variable(0.0, "A_" + std::to_string(th) + "_" + std::to_string(a));
  lay.value = p.add_free_variable("V");
  p.set_objective(lay.value, 1.0);

  std::vector<std::vector<int>> u(sd.na);
  if (ct >= 0) {
    for (int a = 0; a < sd.na; ++a) {
      std::vector<int> mass_vars(k);
      for (int th = 0; th < k; ++th) mass_vars[th] = lay.joint[th][a];
      for (int next : sd.succ[a]) {
        const int var = p.add_free_variable("U_" + std::to_string(a) + "_" + std::to_string(next));
        u[a].push_back(var);
        lay.conts.push_back({a, next, var});
        add_continuation_bound(p, sets.at(ct, next), mass_vars, var, options.bound);
      }
    }
  }

  for (int d = 0; d < sd.nd; ++d) {
    std::vector<lp::Term> row{{lay.value, 1.0}};
    for (int th = 0; th < k; ++th)
      for (int a = 0; a < sd.na; ++a) {
        const double r = sd.r(a, d, th);
        if (r != 0.0) row.push_back({lay.joint[th][a], -r});
      }
    for (int a = 0; a < sd.na && ct >= 0; ++a)
      for (size_t i = 0; i < u[a].size(); ++i) {
        const double w = spec.discount * sd.trans[a][i][d];
        if (w != 0.0) row.push_back({u[a][i], -w});
      }
    p.add_constraint(std::move(row), lp::Relation::kLessEqual, 0.0, "br_" + std::to_string(d));
  }

  lay.consistency_rows.resize(k);
  for (int th = 0; th < k; ++th) {
    std::vector<lp::Term> row;
    for (int a = 0; a < sd.na; ++a) row.push_back({lay.joint[th][a], 1.0});
    lay.consistency_rows[th] =
        p.add_constraint(std::move(row), lp::Relation::kEqual, b[th], "belief_" + std::to_string(th));
  }
  return p;
}

PrimalBackupResult solve_pa(const GameSpec& spec, const PrimalValueSet& sets,
                            int t, int s, std::span<const double> b,
                            const BackupOptions& options) {
  PaLayout lay;
  const auto problem = build_pa(spec, sets, t, s, b, options, &lay);
  const auto sol = lp::solve_lp(problem, options.lp);
  if (sol.status != lp::Status::kOptimal) {
    throw InfeasibleBackup(std::string("P_A at stage ") + std::to_string(t) +
                           ", state " + std::to_string(s) + " is " +
                           lp::to_string(sol.status));
  }
  const int k = spec.num_intents();
  const int na = static_cast<int>(lay.joint.empty() ? 0 : lay.joint[0].size());
  PrimalBackupResult out;
  out.value = sol.values[lay.value];
  out.joint.assign(k, std::vector<double>(na, 0.0));
  out.strategy.assign(k, std::vector<double>(na, 1.0 / na));
  for (int th = 0; th < k; ++th) {
    double total = 0.0;
    for (int a = 0; a < na; ++a) {
      out.joint[th][a] = std::max(0.0, sol.values[lay.joint[th][a]]);
      total += out.joint[th][a];
    }
    if (total > kMassTol) {
      for (int a = 0; a < na; ++a) out.strategy[th][a] = out.joint[th][a] / total;
    }
  }
  for (const auto& c : lay.conts) {
    std::vector<double> mass(k);
    for (int th = 0; th < k; ++th) mass[th] = out.joint[th][c.action];
    out.continuations.push_back({c.action, c.next, std::move(mass), sol.values[c.var]});
  }
  out.belief_gradient.resize(k);
  for (int th = 0; th < k; ++th) out.belief_gradient[th] = sol.duals[lay.consistency_rows[th]];
  return out;
}

SweepStats update_a(const GameSpec& spec, PrimalValueSet& sets,
                    const BackupOptions& options) {
  SweepStats stats;
  const int k = spec.num_intents();
  auto sweep_stage = [&](int t, const PrimalValueSet& source) {
    for (int s = 0; s < sets.num_states(); ++s) {
      if (!sets.is_active(t, s)) continue;
      auto& target = sets.at(t, s);
      for (int th = 0; th < k; ++th) {
        const double v = solve_pa(spec, source, t, s, corner(k, th), options).value;
        stats.max_delta = std::max(stats.max_delta, std::abs(v - target.corners[th]));
        target.corners[th] = v;
        ++stats.solves;
      }
      for (auto& pt : target.points) {
        const double v = solve_pa(spec, source, t, s, pt.coords, options).value;
        stats.max_delta = std::max(stats.max_delta, std::abs(v - pt.value));
        pt.value = v;
        ++stats.solves;
      }
    }
  };
  if (spec.horizon) {
    for (int t = sets.num_stages() - 1; t >= 0; --t) sweep_stage(t, sets);
  } else {
    const PrimalValueSet snapshot = sets;
    sweep_stage(0, snapshot);
  }
  return stats;
}

int expand_a(const GameSpec& spec, PrimalValueSet& sets,
             const BackupOptions& options, const ExpandOptions& expand) {
  int inserted = 0;
  for (int t = 0; t < sets.num_stages(); ++t) {
    const int ct = continuation_stage(spec, t);
    if (ct < 0) continue;
    for (int s = 0; s < sets.num_states(); ++s) {
      if (!sets.is_active(t, s)) continue;
      const auto origins = sets.at(t, s).points;
      const auto sd = internal::stage_data(spec, s);
      for (const auto& origin : origins) {
        const auto res = solve_pa(spec, sets, t, s, origin.coords, options);
        int best_a = -1;
        double best_d = expand.insert.eps_dup;
        std::vector<double> best_b;
        for (int a = 0; a < sd.na; ++a) {
          double mass = 0.0;
          for (const auto& row : res.joint) mass += row[a];
          if (mass <= kMassTol) continue;
          std::vector<double> post(res.joint.size());
          for (size_t th = 0; th < post.size(); ++th) post[th] = res.joint[th][a] / mass;
          double dist = l1_distance(post, origin.coords);
          if (expand.distance == ExpansionDistance::kFromNearestStored) {
            dist = std::numeric_limits<double>::infinity();
            for (int next : sd.succ[a]) dist = std::min(dist, novelty(sets.at(ct, next), post));
          }
          if (dist > best_d) {
            best_d = dist;
            best_a = a;
            best_b = std::move(post);
          }
        }
        if (best_a < 0) continue;
        for (int next : sd.succ[best_a]) {
          if (!sets.is_active(ct, next)) continue;
          if (novelty(sets.at(ct, next), best_b) <= expand.insert.eps_dup) continue;
          const double v = solve_pa(spec, sets, ct, next, best_b, options).value;
          if (insert_point(sets.at(ct, next), {best_b, v}, expand.insert)) ++inserted;
        }
      }
    }
  }
  return inserted;
}

PrimalValueSet initial_primal_sets(const GameSpec& spec) {
  const int k = spec.num_intents();
  const int n = spec.num_states();
  const int stages = spec.num_stages();
  PrimalValueSet sets;
  sets.num_intents = k;
  sets.active = reachable_by_stage(spec);
  sets.sets.assign(stages, std::vector<PrimalStateSet>(n));
  for (auto& row : sets.sets)
    for (auto& set : row) set.corners.assign(k, 0.0);
  for (int th = 0; th < k; ++th) {
    const auto sh = shapley_solve(restrict_to_intent(spec, th));
    for (int t = 0; t < stages; ++t)
      for (int s = 0; s < n; ++s) sets.at(t, s).corners[th] = sh.values[t][s];
  }
  return sets;
}

int continuation_stage(const GameSpec& spec, int t) {
  if (spec.discount == 0.0) return -1;
  if (!spec.horizon) return 0;
  return t + 1 < *spec.horizon ? t + 1 : -1;
}

}  // namespace ncirl
