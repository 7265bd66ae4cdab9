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

#include "ncirl_oracle/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ncirl/errors.hpp"

namespace ncirl::oracle {
namespace {

void compositions(int n, int remaining, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int x = remaining; x >= 0; --x) {
    cur.push_back(x);
    compositions(n, remaining - x, cur, out);
    cur.pop_back();
  }
}

double stage_value(const GameSpec& spec, int s, std::span<const double> b, const Continuation& cont,
                   const OracleConfig& cfg) {
  const int na = spec.num_attacker_actions(s);
  const int nd = spec.num_defender_actions(s);
  const int k = spec.num_intents();
  if (na > cfg.max_actions || nd > cfg.max_actions || k > cfg.max_intents) {
    throw SizeLimitExceeded("game too large for the brute-force oracle");
  }
  if (cfg.grid < 2) throw SizeLimitExceeded("grid needs at least two points per edge");
  const auto grid = simplex_grid(na, cfg.grid);
  long long combos = 1;
  for (int i = 0; i < k; ++i) {
    combos *= static_cast<long long>(grid.size());
    if (combos * nd > cfg.max_evaluations) throw SizeLimitExceeded("strategy grid exceeds the evaluation limit");
  }
  const double gamma = cont ? spec.discount : 0.0;

  std::vector<int> pick(k, 0);
  double best = -std::numeric_limits<double>::infinity();
  for (long long c = 0; c < combos; ++c) {
    long long rest = c;
    for (int i = 0; i < k; ++i) {
      pick[i] = static_cast<int>(rest % static_cast<long long>(grid.size()));
      rest /= static_cast<long long>(grid.size());
    }
    // Posterior after each action does not depend on d.
    std::vector<double> mass(na, 0.0);
    std::vector<std::vector<double>> posts(na, std::vector<double>(k, 0.0));
    for (int a = 0; a < na; ++a) {
      for (int th = 0; th < k; ++th) {
        posts[a][th] = b[th] * grid[pick[th]][a];
        mass[a] += posts[a][th];
      }
      if (mass[a] > 0.0)
        for (double& x : posts[a]) x /= mass[a];
    }
    double worst = std::numeric_limits<double>::infinity();
    for (int d = 0; d < nd; ++d) {
      double v = 0.0;
      for (int a = 0; a < na; ++a) {
        if (!(mass[a] > 0.0)) continue;
        for (const Outcome& o : spec.successors(s, a, d)) {
          double r = 0.0;
          for (int th = 0; th < k; ++th) r += posts[a][th] * o.reward[th];
          double next = 0.0;
          if (gamma > 0.0 && o.prob > 0.0) next = cont(o.next, posts[a]);
          v += mass[a] * o.prob * (r + gamma * next);
        }
      }
      worst = std::min(worst, v);
    }
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace

std::vector<std::vector<double>> simplex_grid(int n, int grid) {
  std::vector<std::vector<int>> raw;
  std::vector<int> cur;
  compositions(n, grid - 1, cur, raw);
  std::vector<std::vector<double>> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = static_cast<double>(r[i]) / (grid - 1);
    out.push_back(std::move(p));
  }
  return out;
}

double brute_minimax_stage(const GameSpec& spec, int s, std::span<const double> b,
                           const Continuation& continuation, const OracleConfig& config) {
  return stage_value(spec, s, b, continuation, config);
}

double brute_two_stage_value(const GameSpec& spec, std::span<const double> b0, const OracleConfig& config) {
  if (config.horizon_cap < 2) throw SizeLimitExceeded("two stages exceed the horizon cap");
  if (spec.horizon && *spec.horizon != 2) throw SizeLimitExceeded("finite horizon must be exactly two");
  const Continuation last = [&](int next, std::span<const double> post) {
    return stage_value(spec, next, post, nullptr, config);
  };
  const auto marginal = spec.state_marginal();
  double total = 0.0;
  for (int s = 0; s < spec.num_states(); ++s) {
    if (!(marginal[s] > 0.0)) continue;
    total += marginal[s] * stage_value(spec, s, b0, last, config);
  }
  return total;
}

ProfileValue evaluate_profile(const GameSpec& spec, int theta, const Profile& attacker, const Profile& defender,
                              int horizon) {
  const int n = spec.num_states();
  std::vector<double> dist(n, 0.0);
  double total_prior = 0.0;
  for (int s = 0; s < n; ++s) {
    dist[s] = spec.prior[s][theta];
    total_prior += dist[s];
  }
  if (!(total_prior > 0.0)) throw ConfigError("intent has no prior mass");
  for (double& p : dist) p /= total_prior;

  ProfileValue out;
  double discount = 1.0;
  for (int t = 0; t < horizon; ++t) {
    std::vector<double> next(n, 0.0);
    double stage = 0.0;
    for (int s = 0; s < n; ++s) {
      if (!(dist[s] > 0.0)) continue;
      const auto& x = attacker.at(t).at(s);
      const auto& y = defender.at(t).at(s);
      for (int a = 0; a < spec.num_attacker_actions(s); ++a)
        for (int d = 0; d < spec.num_defender_actions(s); ++d) {
          const double w = dist[s] * x.at(a) * y.at(d);
          if (w == 0.0) continue;
          for (const Outcome& o : spec.successors(s, a, d)) {
            stage += w * o.prob * o.reward[theta];
            next[o.next] += w * o.prob;
          }
        }
    }
    out.per_stage.push_back(discount * stage);
    out.total += discount * stage;
    discount *= spec.discount;
    dist = std::move(next);
  }
  return out;
}

std::vector<double> joint_bayes_posterior(const GameSpec& spec, const ActionConditionals& cond, int s,
                                          std::span<const double> b, int a, int d, int next) {
  const int k = spec.num_intents();
  const int na = spec.num_attacker_actions(s);
  const int nd = spec.num_defender_actions(s);
  // joint[theta][a'][d'][s'] for every combination; the observed slice is then
  // summed over theta and normalized.
  std::vector<double> joint(static_cast<size_t>(k) * na * nd * spec.num_states(), 0.0);
  auto at = [&](int th, int aa, int dd, int sn) -> double& {
    return joint[((static_cast<size_t>(th) * na + aa) * nd + dd) * spec.num_states() + sn];
  };
  for (int th = 0; th < k; ++th)
    for (int aa = 0; aa < na; ++aa)
      for (int dd = 0; dd < nd; ++dd)
        for (const Outcome& o : spec.successors(s, aa, dd))
          at(th, aa, dd, o.next) += b[th] * cond.rows[th][aa] * (1.0 / nd) * o.prob;
  double evidence = 0.0;
  for (int th = 0; th < k; ++th) evidence += at(th, a, d, next);
  if (!(evidence > 0.0)) {
    throw ZeroProbabilityObservation("observation (a=" + std::to_string(a) + ", d=" + std::to_string(d) +
                                     ", s'=" + std::to_string(next) + ") has zero probability");
  }
  std::vector<double> post(k);
  for (int th = 0; th < k; ++th) post[th] = at(th, a, d, next) / evidence;
  return post;
}

}  // namespace ncirl::oracle
