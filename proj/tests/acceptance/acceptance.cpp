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

// Acceptance runner: one PASS/FAIL line per criterion. Exits nonzero when any
// criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ncirl/agents.hpp"
#include "ncirl/belief.hpp"
#include "ncirl/benchmark.hpp"
#include "ncirl/dual.hpp"
#include "ncirl/environments.hpp"
#include "ncirl/matrix_game.hpp"
#include "ncirl/ncpbvi.hpp"
#include "ncirl/primal.hpp"
#include "ncirl/sim.hpp"
#include "ncirl_oracle/oracle.hpp"
#include "test_games.hpp"

namespace ncirl {
namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    va_list args;
    va_start(args, fmt);
    append(fmt, args);
    va_end(args);
    if (!ok) {
      pass = false;
      detail += " [violated]";
    }
  }

  // Reported but not gated.
  void note(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    va_list args;
    va_start(args, fmt);
    append(fmt, args);
    va_end(args);
    detail += " [info]";
  }

 private:
  void append(const char* fmt, va_list args) {
    char buf[512];
    std::vsnprintf(buf, sizeof buf, fmt, args);
    if (!detail.empty()) detail += "; ";
    detail += buf;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1: patrolling golden values.
Verdict patrolling_golden() {
  Verdict v;
  const auto start = Clock::now();
  const auto cfg = bench_config_from_json(
      {{"environment", "patrolling"}, {"seeds", 1}, {"true_theta", 1}, {"inferred_theta", 0}});
  const auto res = run_benchmark(cfg);
  const auto& s = res.summary.at(0);
  v.require(std::abs(s.mairl.mean - 4.0 / 3.0) <= 1e-9, "MA-IRL defence %.12f vs 4/3", s.mairl.mean);
  v.require(s.ncirl.mean <= 5.0 / 6.0 + 0.05, "N-CIRL defence %.6f <= 5/6 + 0.05", s.ncirl.mean);

  // Stage values of the revealing profile.
  const auto spec = patrolling_game();
  oracle::Profile thief(2, std::vector<std::vector<double>>(4)), guard(2, std::vector<std::vector<double>>(4));
  for (int st = 0; st < 4; ++st) {
    const std::vector<double> to_m_thief = st / 2 == 0 ? std::vector<double>{1, 0} : std::vector<double>{0, 1};
    const std::vector<double> to_m_guard = st % 2 == 0 ? std::vector<double>{1, 0} : std::vector<double>{0, 1};
    thief[0][st] = thief[1][st] = to_m_thief;
    guard[0][st] = {0.5, 0.5};
    guard[1][st] = to_m_guard;
  }
  const auto profile = oracle::evaluate_profile(spec, 1, thief, guard, 2);
  v.require(std::abs(profile.per_stage[0] - 0.5) <= 1e-12 && std::abs(profile.per_stage[1] - 1.0 / 3.0) <= 1e-12,
            "revealing profile stages %.6f + %.6f", profile.per_stage[0], profile.per_stage[1]);

  // Solver's own stage split for the N-CIRL arm, averaged over start states.
  // The computed equilibrium need not follow the revealing profile.
  const auto shared = std::make_shared<const GameSpec>(spec);
  const auto pol = run_ncpbvi(spec, cfg.solver);
  const auto primal = std::make_shared<const PrimalValueSet>(pol.primal);
  const auto dual = std::make_shared<const DualValueSet>(pol.dual);
  std::vector<double> stage(2, 0.0);
  for (int s0 = 0; s0 < 4; ++s0) {
    NcirlAttacker att(shared, primal, cfg.solver.backup, 1);
    NcirlDefender def(shared, dual, cfg.solver.backup);
    att.reset(s0, pol.initial_beliefs[s0]);
    def.reset(s0, pol.initial_zetas[s0]);
    const auto e = expected_reward(spec, att, def, 1, 2);
    for (int t = 0; t < 2; ++t) stage[t] += 0.25 * e.per_stage[t];
  }
  v.note("N-CIRL stages %.6f + %.6f, bounds [%.6f, %.6f]", stage[0], stage[1], pol.lower_bound, pol.upper_bound);
  const double secs = seconds_since(start);
  v.require(secs < 30.0, "%.2f s < 30 s", secs);
  return v;
}

// 2: Bayes update against joint enumeration.
Verdict bayes_oracle() {
  Verdict v;
  Rng rng(2026);
  double max_err = 0.0, max_spread = 0.0;
  int instances = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(2));
    const int na = 2 + static_cast<int>(rng.below(2));
    const auto spec = testing::random_game(rng, 2 + static_cast<int>(rng.below(2)), na, 2, k, 0.5);
    const int s = static_cast<int>(rng.below(spec.num_states()));
    const auto b = testing::random_distribution(rng, k, true);
    ActionConditionals cond;
    for (int th = 0; th < k; ++th) cond.rows.push_back(testing::random_distribution(rng, na, true));
    bool counted = false;
    for (int a = 0; a < na; ++a) {
      double mass = 0.0;
      for (int th = 0; th < k; ++th) mass += b[th] * cond.rows[th][a];
      if (mass <= 1e-12) continue;
      const auto direct = update_belief(cond, {s, b}, a);
      std::vector<double> first;
      for (int d = 0; d < spec.num_defender_actions(s); ++d)
        for (const auto& o : spec.successors(s, a, d)) {
          const auto joint = oracle::joint_bayes_posterior(spec, cond, s, b, a, d, o.next);
          for (int th = 0; th < k; ++th) {
            max_err = std::max(max_err, std::abs(joint[th] - direct[th]));
            if (!first.empty()) max_spread = std::max(max_spread, std::abs(joint[th] - first[th]));
          }
          if (first.empty()) first = joint;
          counted = true;
        }
    }
    instances += counted;
  }
  v.require(instances >= 500, "%d instances", instances);
  v.require(max_err <= 1e-9, "max |error| %.3g", max_err);
  v.require(max_spread <= 1e-9, "max spread over (d, s') %.3g", max_spread);
  return v;
}

// 3: contraction of frozen-continuation sweeps on fixed grids.
template <class Sets, class Flatten, class Sweep>
double worst_ratio(Sets a, Sets b, Flatten flatten, Sweep sweep, int sweeps, int* counted) {
  auto dist = [&](const Sets& x, const Sets& y) {
    const auto fx = flatten(x), fy = flatten(y);
    double d = 0.0;
    for (size_t i = 0; i < fx.size(); ++i) d = std::max(d, std::abs(fx[i] - fy[i]));
    return d;
  };
  double worst = 0.0;
  for (int i = 0; i < sweeps; ++i) {
    const double before = dist(a, b);
    sweep(a);
    sweep(b);
    const double after = dist(a, b);
    if (before > 1e-6) {
      worst = std::max(worst, after / before);
      ++*counted;
    }
  }
  return worst;
}

Verdict contraction() {
  Verdict v;
  for (double gamma : {0.5, 0.9}) {
    const auto spec = testing::two_state_game(gamma);
    Rng rng(static_cast<std::uint64_t>(gamma * 100));
    auto p0 = initial_primal_sets(spec);
    auto d0 = initial_dual_sets(spec);
    for (int s = 0; s < 2; ++s)
      for (int i = 1; i <= 7; ++i) {
        const double x = i / 8.0;
        p0.at(0, s).points.push_back({{x, 1.0 - x}, 0.0});
        d0.at(0, s).points.push_back({{x, 1.0 - x}, 0.0});
        d0.at(0, s).points.push_back({{2.0 * x, 0.0}, 0.0});
      }
    auto p1 = p0, p2 = p0;
    auto d1 = d0, d2 = d0;
    auto jitter = [&](auto& sets, bool dual) {
      for (auto& set : sets.sets[0]) {
        if constexpr (std::is_same_v<std::decay_t<decltype(set)>, PrimalStateSet>) {
          for (double& c : set.corners) c = dual ? 0.0 : 4.0 * rng.uniform() - 2.0;
        } else {
          set.anchor = 4.0 * rng.uniform() - 2.0;
        }
        for (auto& p : set.points) p.value = 4.0 * rng.uniform() - 2.0;
      }
    };
    jitter(p1, false);
    jitter(p2, false);
    jitter(d1, true);
    jitter(d2, true);
    const auto flat_p = [](const PrimalValueSet& x) {
      std::vector<double> out;
      for (const auto& set : x.sets[0]) {
        out.insert(out.end(), set.corners.begin(), set.corners.end());
        for (const auto& p : set.points) out.push_back(p.value);
      }
      return out;
    };
    const auto flat_d = [](const DualValueSet& x) {
      std::vector<double> out;
      for (const auto& set : x.sets[0]) {
        out.push_back(set.anchor);
        for (const auto& p : set.points) out.push_back(p.value);
      }
      return out;
    };
    int np = 0, nd = 0;
    const double rp = worst_ratio(p1, p2, flat_p, [&](PrimalValueSet& x) { update_a(spec, x); }, 12, &np);
    const double rd = worst_ratio(d1, d2, flat_d, [&](DualValueSet& x) { update_d(spec, x); }, 12, &nd);
    v.require(rp <= gamma + 0.05 && np >= 10, "gamma %.1f primal ratio %.4f over %d sweeps", gamma, rp, np);
    v.require(rd <= gamma + 0.05 && nd >= 10, "gamma %.1f dual ratio %.4f over %d sweeps", gamma, rd, nd);
  }
  return v;
}

// 4: LP equivalences at zero discount.
Verdict lp_equivalences() {
  Verdict v;
  Rng rng(4);
  double err_a = 0.0, err_d = 0.0, err_shift = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = testing::random_matrix(rng, 2 + static_cast<int>(rng.below(4)), 2 + static_cast<int>(rng.below(4)));
    const auto spec = testing::matrix_spec({m}, 0.0);
    const double value = solve_matrix_game(m).value;
    err_a = std::max(err_a, std::abs(solve_pa(spec, initial_primal_sets(spec), 0, 0, std::vector<double>{1.0}).value - value));
    const auto dual = initial_dual_sets(spec);
    err_d = std::max(err_d, std::abs(solve_pd(spec, dual, 0, 0, std::vector<double>{0.0}).value - value));
    const auto m2 = testing::random_matrix(rng, static_cast<int>(m.size()), static_cast<int>(m[0].size()));
    const auto two = testing::matrix_spec({m, m2}, 0.0);
    const auto dual2 = initial_dual_sets(two);
    const std::vector<double> z{rng.uniform(), rng.uniform()};
    const double c = 3.0 * rng.uniform();
    const std::vector<double> zc{z[0] + c, z[1] + c};
    err_shift = std::max(err_shift, std::abs(solve_pd(two, dual2, 0, 0, zc).value - solve_pd(two, dual2, 0, 0, z).value - c));
  }
  v.require(err_a <= 1e-6, "P_A vs matrix game %.3g", err_a);
  v.require(err_d <= 1e-6, "P_D(0) vs matrix game %.3g", err_d);
  v.require(err_shift <= 1e-6, "uniform zeta shift %.3g", err_shift);
  return v;
}

// 5: sawtooth hand traces and homogeneity.
Verdict sawtooth_traces() {
  Verdict v;
  const std::vector<double> ca{1.0, 3.0};
  const std::vector<ValuePoint> ya{{{0.5, 0.5}, 2.5}};
  const double a1 = sawtooth_a(ca, ya, std::vector<double>{0.5, 0.5});
  const double a2 = sawtooth_a(ca, ya, std::vector<double>{1.0, 0.0});
  const std::vector<double> cd{2.0, 4.0};
  const std::vector<ValuePoint> yd{{{1.0, 1.0}, 5.0}};
  const double d1 = sawtooth_d(cd, yd, std::vector<double>{1.0, 1.0});
  const double d2 = sawtooth_d(cd, yd, std::vector<double>{1.0, 0.0});
  v.require(a1 == 2.5 && a2 == 1.0, "A traces %.17g, %.17g", a1, a2);
  v.require(d1 == 5.0 && d2 == 2.0, "D traces %.17g, %.17g", d1, d2);
  const double ea = sawtooth_a(ca, {}, std::vector<double>{0.25, 0.75});
  const double ed = sawtooth_d(cd, {}, std::vector<double>{0.5, 2.0});
  v.require(ea == 2.5 && ed == 9.0, "empty sets %.17g, %.17g", ea, ed);

  Rng rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(3));
    std::vector<double> c(k);
    for (double& x : c) x = 2.0 * rng.uniform() - 1.0;
    std::vector<ValuePoint> pts;
    for (int j = 0; j < 4; ++j) pts.push_back({testing::random_distribution(rng, k, true), 2.0 * rng.uniform() - 1.0});
    auto x = testing::random_distribution(rng, k, true);
    const double scale = 0.01 + 50.0 * rng.uniform();
    auto kx = x;
    for (double& e : kx) e *= scale;
    const double va = sawtooth_a(c, pts, x), vd = sawtooth_d(c, pts, x);
    worst = std::max(worst, std::abs(sawtooth_a(c, pts, kx) - scale * va) / (1.0 + std::abs(scale * va)));
    worst = std::max(worst, std::abs(sawtooth_d(c, pts, kx) - scale * vd) / (1.0 + std::abs(scale * vd)));
  }
  v.require(worst <= 1e-9, "homogeneity error %.3g over 100 triples", worst);
  return v;
}

// 6: primal corners against per-intent Shapley values.
Verdict corner_exactness() {
  Verdict v;
  Rng rng(6);
  const std::vector<GameSpec> games = {testing::two_state_game(0.8), testing::random_game(rng, 3, 2, 2, 2, 0.7)};
  double worst = 0.0;
  for (const auto& spec : games) {
    const auto res = run_ncpbvi(spec, SolverConfig{});
    for (int th = 0; th < 2; ++th) {
      const auto sh = shapley_solve(restrict_to_intent(spec, th));
      for (int s = 0; s < spec.num_states(); ++s) {
        if (res.primal.is_active(0, s)) worst = std::max(worst, std::abs(res.primal.at(0, s).corners[th] - sh.values[0][s]));
      }
    }
  }
  v.require(worst <= 5e-3, "max corner gap %.3g", worst);
  return v;
}

// 7: benchmark sign at n = 6, 20 seeds, horizon 6.
Verdict benchmark_sign() {
  Verdict v;
  const auto start = Clock::now();
  const auto cfg = bench_config_from_json({{"sizes", {6}}, {"seeds", 20}, {"horizon", 6}});
  const auto res = run_benchmark(cfg);
  const auto& s = res.summary.at(0);
  std::printf("  n=6: N-CIRL %.4f +- %.4f (%d), MA-IRL %.4f +- %.4f (%d), reduction %.4f, failures %d\n",
              s.ncirl.mean, s.ncirl.stderr_, s.ncirl.count, s.mairl.mean, s.mairl.stderr_, s.mairl.count,
              s.relative_reduction, s.failures);
  v.require(s.ncirl.count > 0 && s.ncirl.mean <= s.mairl.mean, "N-CIRL %.4f <= MA-IRL %.4f", s.ncirl.mean,
            s.mairl.mean);
  const double secs = seconds_since(start);
  v.require(secs < 1800.0, "%.1f s < 30 min", secs);
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 8: byte-identical CSV from two benchmark runs.
Verdict determinism(const std::string& cli) {
  Verdict v;
  const nlohmann::json cfg{{"sizes", {4, 5}}, {"seeds", 3}, {"base_seed", 11}, {"rollouts", 50}};
  if (cli.empty()) {
    const auto c = bench_config_from_json(cfg);
    const bool same = to_csv(run_benchmark(c)) == to_csv(run_benchmark(c));
    v.require(same, "library CSV identical across two runs");
    return v;
  }
  const auto dir = std::filesystem::temp_directory_path() / ("ncirl_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bench.json") << cfg.dump(2);
  std::string csv[2];
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("run" + std::to_string(run));
    const std::string cmd = "\"" + cli + "\" benchmark --config \"" + (dir / "bench.json").string() + "\" --out \"" +
                            out.string() + "\" > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    v.require(rc == 0, "run %d exit status %d", run + 1, rc);
    csv[run] = slurp(out / "results.csv");
  }
  v.require(!csv[0].empty() && csv[0] == csv[1], "results.csv identical (%zu bytes)", csv[0].size());
  std::filesystem::remove_all(dir);
  return v;
}

}  // namespace
}  // namespace ncirl

int main(int argc, char** argv) {
  CLI::App app{"ncirl acceptance runner"};
  std::string cli;
  std::vector<int> only;
  app.add_option("--cli", cli, "ncirl executable used for the determinism criterion");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  using ncirl::Verdict;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"patrolling golden values", ncirl::patrolling_golden},
      {"Bayes update vs joint enumeration", ncirl::bayes_oracle},
      {"backup contraction", ncirl::contraction},
      {"LP equivalences at zero discount", ncirl::lp_equivalences},
      {"sawtooth traces and homogeneity", ncirl::sawtooth_traces},
      {"corner exactness", ncirl::corner_exactness},
      {"benchmark sign at n = 6", ncirl::benchmark_sign},
      {"benchmark determinism", [&] { return ncirl::determinism(cli); }},
  };
  int failed = 0, ran = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = ncirl::Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    ++ran;
    failed += !v.pass;
    std::printf("criterion %d (%s): %s [%.1f s] %s\n", id, criteria[i].first, v.pass ? "PASS" : "FAIL",
                ncirl::seconds_since(start), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
