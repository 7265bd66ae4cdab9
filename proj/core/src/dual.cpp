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

#include "ncirl/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "internal/stage_data.hpp"
#include "ncirl/errors.hpp"
#include "ncirl/primal.hpp"

namespace ncirl {
namespace {

constexpr double kMassTol = 1e-9;

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double sum(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

}  // namespace

double sawtooth_d(std::span<const double> corner_values,
                  const std::vector<ValuePoint>& points,
                  std::span<const double> zeta) {
  const double cz = dot(corner_values, zeta);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& pt : points) {
    const double excess = pt.value - dot(corner_values, pt.coords);
    if (excess >= 0.0) continue;
    double psi = std::numeric_limits<double>::infinity();
    for (size_t th = 0; th < zeta.size(); ++th) {
      if (pt.coords[th] > 0.0) psi = std::min(psi, zeta[th] / pt.coords[th]);
    }
    if (!std::isfinite(psi)) continue;
    best = std::max(best, cz + psi * excess);
  }
  return std::isfinite(best) ? best : cz;
}

lp::LpProblem build_pd(const GameSpec& spec, const DualValueSet& sets, int t,
                       int s, std::span<const double> zeta,
                       const BackupOptions& options, PdLayout* layout) {
  const int k = spec.num_intents();
  if (static_cast<int>(zeta.size()) != k || sets.num_intents != k) {
    throw std::invalid_argument("build_pd: zeta dimension differs from |Theta|");
  }
  const auto sd = internal::stage_data(spec, s);
  const int ct = continuation_stage(spec, t);
  PdLayout local;
  PdLayout& lay = layout ? *layout : local;
  lay = PdLayout{};

  lp::LpProblem p(lp::Sense::kMinimize);
  lay.defender.resize(sd.nd);
  std::vector<lp::Term> simplex;
  for (int d = 0; d < sd.nd; ++d) {
    lay.defender[d] = p.add_variable(0.0, "D_" + std::to_string(d));
    simplex.push_back({lay.defender[d], 1.0});
  }
  p.add_constraint(std::move(simplex), lp::Relation::kEqual, 1.0, "simplex");
  lay.value = p.add_free_variable("W");
  p.set_objective(lay.value, 1.0);

  // Per attacker action, the continuation terms of its (a, theta) rows:
  // cont_terms[a][theta] lists (var, coef) for gamma * (W_as' - lambda_as'(theta)).
  std::vector<std::vector<std::vector<lp::Term>>> cont_terms(
      sd.na, std::vector<std::vector<lp::Term>>(k));
  if (ct >= 0) {
    const double g = spec.discount;
    for (int a = 0; a < sd.na; ++a) {
      for (size_t i = 0; i < sd.succ[a].size(); ++i) {
        const int next = sd.succ[a][i];
        const auto& set = sets.at(ct, next);
        PdLayout::Cont c{a, next, {}, {}, set.anchor, -1, {}};
        // Defender-induced mass of (a, next).
        std::vector<lp::Term> mass_terms;
        for (int d = 0; d < sd.nd; ++d) {
          const double tr = sd.trans[a][i][d];
          if (tr != 0.0) mass_terms.push_back({lay.defender[d], -tr});
        }
        if (options.bound == BoundForm::kHull) {
          std::vector<lp::Term> row = mass_terms;
          const int b0 = p.add_variable(0.0);
          c.weights.push_back(b0);
          row.push_back({b0, 1.0});
          for (int th = 0; th < k; ++th) cont_terms[a][th].push_back({b0, g * set.anchor});
          for (const auto& pt : set.points) {
            const int bj = p.add_variable(0.0);
            c.weights.push_back(bj);
            c.points.push_back(&pt);
            row.push_back({bj, 1.0});
            for (int th = 0; th < k; ++th)
              cont_terms[a][th].push_back({bj, g * (pt.value - pt.coords[th])});
          }
          p.add_constraint(std::move(row), lp::Relation::kEqual, 0.0, "mass");
        } else {
          c.w = p.add_free_variable();
          for (int th = 0; th < k; ++th) c.lambda.push_back(p.add_variable(0.0));
          // Corner part: anchor * mass + sum(lambda).
          std::vector<lp::Term> corner_row{{c.w, 1.0}};
          for (const auto& mt : mass_terms) corner_row.push_back({mt.var, mt.coef * set.anchor});
          for (int th = 0; th < k; ++th) corner_row.push_back({c.lambda[th], -1.0});
          p.add_constraint(corner_row, lp::Relation::kGreaterEqual, 0.0, "corner");
          for (const auto& pt : set.points) {
            const double excess = pt.value - (set.anchor + sum(pt.coords));
            if (excess >= 0.0) continue;
            auto row = corner_row;
            for (const auto& mt : mass_terms) row.push_back({mt.var, mt.coef * excess});
            p.add_constraint(row, lp::Relation::kGreaterEqual, 0.0, "saw_p");
            for (int th = 0; th < k; ++th) {
              if (pt.coords[th] <= 0.0) continue;
              auto r = corner_row;
              r.push_back({c.lambda[th], -excess / pt.coords[th]});
              p.add_constraint(std::move(r), lp::Relation::kGreaterEqual, 0.0, "saw");
            }
          }
          for (int th = 0; th < k; ++th) {
            cont_terms[a][th].push_back({c.w, g});
            cont_terms[a][th].push_back({c.lambda[th], -g});
          }
        }
        lay.conts.push_back(std::move(c));
      }
    }
  }

  for (int a = 0; a < sd.na; ++a) {
    for (int th = 0; th < k; ++th) {
      std::vector<lp::Term> row{{lay.value, 1.0}};
      for (int d = 0; d < sd.nd; ++d) {
        const double r = sd.r(a, d, th);
        if (r != 0.0) row.push_back({lay.defender[d], -r});
      }
      for (const auto& term : cont_terms[a][th]) {
        if (term.coef != 0.0) row.push_back({term.var, -term.coef});
      }
      p.add_constraint(std::move(row), lp::Relation::kGreaterEqual, zeta[th],
                       "br_" + std::to_string(a) + "_" + std::to_string(th));
    }
  }
  return p;
}

DualBackupResult solve_pd(const GameSpec& spec, const DualValueSet& sets,
                          int t, int s, std::span<const double> zeta,
                          const BackupOptions& options) {
  PdLayout lay;
  const auto problem = build_pd(spec, sets, t, s, zeta, options, &lay);
  const auto sol = lp::solve_lp(problem, options.lp);
  if (sol.status != lp::Status::kOptimal) {
    throw InfeasibleBackup(std::string("P_D at stage ") + std::to_string(t) +
                           ", state " + std::to_string(s) + " is " +
                           lp::to_string(sol.status));
  }
  const int k = spec.num_intents();
  DualBackupResult out;
  out.value = sol.values[lay.value];
  double total = 0.0;
  for (int var : lay.defender) {
    out.defender.push_back(std::max(0.0, sol.values[var]));
    total += out.defender.back();
  }
  for (double& x : out.defender) x /= total;

  const auto sd = lay.conts.empty() ? internal::StageData{} : internal::stage_data(spec, s);
  for (const auto& c : lay.conts) {
    DualContinuation dc;
    dc.action = c.action;
    dc.next = c.next;
    const auto& succ = sd.succ[c.action];
    const size_t i = static_cast<size_t>(std::find(succ.begin(), succ.end(), c.next) - succ.begin());
    for (size_t d = 0; d < out.defender.size(); ++d) dc.mass += out.defender[d] * sd.trans[c.action][i][d];
    dc.lambda.assign(k, 0.0);
    if (options.bound == BoundForm::kHull) {
      const double b0 = std::max(0.0, sol.values[c.weights[0]]);
      dc.value = b0 * c.anchor;
      for (size_t j = 0; j < c.points.size(); ++j) {
        const double bj = std::max(0.0, sol.values[c.weights[j + 1]]);
        dc.value += bj * c.points[j]->value;
        for (int th = 0; th < k; ++th) dc.lambda[th] += bj * c.points[j]->coords[th];
      }
    } else {
      dc.value = sol.values[c.w];
      for (int th = 0; th < k; ++th) dc.lambda[th] = std::max(0.0, sol.values[c.lambda[th]]);
    }
    dc.zeta_next.assign(k, 0.0);
    if (dc.mass > kMassTol) {
      for (int th = 0; th < k; ++th) dc.zeta_next[th] = dc.lambda[th] / dc.mass;
    } else {
      dc.degenerate = true;
    }
    out.continuations.push_back(std::move(dc));
  }
  return out;
}

SweepStats update_d(const GameSpec& spec, DualValueSet& sets,
                    const BackupOptions& options) {
  SweepStats stats;
  const std::vector<double> zero(spec.num_intents(), 0.0);
  auto sweep_stage = [&](int t, const DualValueSet& source) {
    for (int s = 0; s < sets.num_states(); ++s) {
      if (!sets.is_active(t, s)) continue;
      auto& target = sets.at(t, s);
      const double w0 = solve_pd(spec, source, t, s, zero, options).value;
      stats.max_delta = std::max(stats.max_delta, std::abs(w0 - target.anchor));
      target.anchor = w0;
      ++stats.solves;
      for (auto& pt : target.points) {
        const double v = solve_pd(spec, source, t, s, pt.coords, options).value;
        stats.max_delta = std::max(stats.max_delta, std::abs(v - pt.value));
        pt.value = v;
        ++stats.solves;
      }
    }
  };
  if (spec.horizon) {
    for (int t = sets.num_stages() - 1; t >= 0; --t) sweep_stage(t, sets);
  } else {
    const DualValueSet snapshot = sets;
    sweep_stage(0, snapshot);
  }
  return stats;
}

int expand_d(const GameSpec& spec, DualValueSet& sets,
             const BackupOptions& options, const ExpandOptions& expand) {
  int inserted = 0;
  const int k = spec.num_intents();
  for (int t = 0; t < sets.num_stages(); ++t) {
    const int ct = continuation_stage(spec, t);
    if (ct < 0) continue;
    for (int s = 0; s < sets.num_states(); ++s) {
      if (!sets.is_active(t, s)) continue;
      std::vector<std::vector<double>> origins{std::vector<double>(k, 0.0)};
      for (const auto& pt : sets.at(t, s).points) origins.push_back(pt.coords);
      for (const auto& origin : origins) {
        const auto res = solve_pd(spec, sets, t, s, origin, options);
        struct Candidate {
          double novelty;
          int next;
          std::vector<double> zeta;
        };
        std::vector<Candidate> pool;
        for (const auto& c : res.continuations) {
          if (c.degenerate || !sets.is_active(ct, c.next)) continue;
          const double nov = novelty(sets.at(ct, c.next), c.zeta_next);
          if (nov > expand.insert.eps_dup) pool.push_back({nov, c.next, c.zeta_next});
        }
        std::stable_sort(pool.begin(), pool.end(), [](const Candidate& x, const Candidate& y) {
          return x.novelty > y.novelty;
        });
        int taken = 0;
        for (const auto& cand : pool) {
          if (taken >= expand.max_per_point) break;
          auto& target = sets.at(ct, cand.next);
          if (novelty(target, cand.zeta) <= expand.insert.eps_dup) continue;
          const double v = solve_pd(spec, sets, ct, cand.next, cand.zeta, options).value;
          if (insert_point(target, {cand.zeta, v}, expand.insert)) {
            ++inserted;
            ++taken;
          }
        }
      }
    }
  }
  return inserted;
}

DualValueSet initial_dual_sets(const GameSpec& spec) {
  const int n = spec.num_states();
  const int stages = spec.num_stages();
  DualValueSet sets;
  sets.num_intents = spec.num_intents();
  sets.active = reachable_by_stage(spec);
  sets.sets.assign(stages, std::vector<DualStateSet>(n));
  for (int t = 0; t < stages; ++t) {
    double bound;
    if (spec.horizon) {
      bound = 0.0;
      double g = 1.0;
      for (int i = t; i < stages; ++i, g *= spec.discount) bound += g * spec.r_max;
    } else {
      bound = spec.r_max / (1.0 - spec.discount);
    }
    for (auto& set : sets.sets[t]) set.anchor = bound;
  }
  return sets;
}

int seed_dual_from_primal(const GameSpec& spec, const PrimalValueSet& primal,
                          DualValueSet& dual, const BackupOptions& options,
                          const InsertPolicy& insert) {
  int inserted = 0;
  const int k = spec.num_intents();
  for (int t = 0; t < primal.num_stages(); ++t) {
    for (int s = 0; s < primal.num_states(); ++s) {
      if (!primal.is_active(t, s)) continue;
      std::vector<std::vector<double>> beliefs;
      for (int th = 0; th < k; ++th) {
        std::vector<double> e(k, 0.0);
        e[th] = 1.0;
        beliefs.push_back(std::move(e));
      }
      for (const auto& pt : primal.at(t, s).points) beliefs.push_back(pt.coords);
      for (const auto& b : beliefs) {
        const auto y = solve_pa(spec, primal, t, s, b, options).belief_gradient;
        const double top = *std::max_element(y.begin(), y.end());
        std::vector<double> zeta(k);
        for (int th = 0; th < k; ++th) zeta[th] = top - y[th];
        auto& target = dual.at(t, s);
        if (novelty(target, zeta) <= insert.eps_dup) continue;
        const double v = solve_pd(spec, dual, t, s, zeta, options).value;
        if (insert_point(target, {zeta, v}, insert)) ++inserted;
      }
    }
  }
  return inserted;
}

}  // namespace ncirl
