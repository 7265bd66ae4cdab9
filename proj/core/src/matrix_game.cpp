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

#include "ncirl/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncirl/errors.hpp"
#include "ncirl/lp.hpp"

namespace ncirl {
namespace {

constexpr double kValueSlack = 1e-9;
constexpr double kSupportTol = 1e-8;

// Maximin strategy for the row player of `m`, refined toward uniform-opponent
// payoff. Callers obtain the column side by transposing and negating.
std::pair<double, std::vector<double>> maximin(const Matrix& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());

  auto build = [&](lp::LpProblem& p, std::vector<int>& x) {
    x.resize(rows);
    std::vector<lp::Term> simplex;
    for (int i = 0; i < rows; ++i) {
      x[i] = p.add_variable(0.0, "x" + std::to_string(i));
      simplex.push_back({x[i], 1.0});
    }
    p.add_constraint(simplex, lp::Relation::kEqual, 1.0, "simplex");
  };

  lp::LpProblem p(lp::Sense::kMaximize);
  std::vector<int> x;
  build(p, x);
  const int v = p.add_free_variable("v");
  p.set_objective(v, 1.0);
  for (int j = 0; j < cols; ++j) {
    std::vector<lp::Term> terms{{v, 1.0}};
    for (int i = 0; i < rows; ++i) terms.push_back({x[i], -m[i][j]});
    p.add_constraint(terms, lp::Relation::kLessEqual, 0.0);
  }
  const auto sol = lp::solve_lp(p);
  if (sol.status != lp::Status::kOptimal) {
    throw NumericalFailure("matrix game LP not optimal");
  }
  const double value = sol.objective_value;

  lp::LpProblem refine(lp::Sense::kMaximize);
  std::vector<int> y;
  build(refine, y);
  for (int i = 0; i < rows; ++i) {
    double avg = 0.0;
    for (int j = 0; j < cols; ++j) avg += m[i][j];
    refine.set_objective(y[i], avg / cols);
  }
  for (int j = 0; j < cols; ++j) {
    std::vector<lp::Term> terms;
    for (int i = 0; i < rows; ++i) terms.push_back({y[i], m[i][j]});
    refine.add_constraint(terms, lp::Relation::kGreaterEqual,
                          value - kValueSlack * (1.0 + std::abs(value)));
  }
  const auto ref = lp::solve_lp(refine);
  std::vector<double> strategy(rows);
  const auto& src = ref.status == lp::Status::kOptimal ? ref.values : sol.values;
  const auto& idx = ref.status == lp::Status::kOptimal ? y : x;
  double total = 0.0;
  for (int i = 0; i < rows; ++i) {
    strategy[i] = src[idx[i]] > kSupportTol ? src[idx[i]] : 0.0;
    total += strategy[i];
  }
  for (double& s : strategy) s /= total;
  return {value, strategy};
}

}  // namespace

MatrixGameSolution solve_matrix_game(const Matrix& payoff) {
  if (payoff.empty() || payoff[0].empty()) {
    throw std::invalid_argument("empty payoff matrix");
  }
  const size_t cols = payoff[0].size();
  for (const auto& row : payoff) {
    if (row.size() != cols) throw std::invalid_argument("ragged payoff matrix");
  }
  MatrixGameSolution out;
  auto [value, rows] = maximin(payoff);
  Matrix neg_t(cols, std::vector<double>(payoff.size()));
  for (size_t i = 0; i < payoff.size(); ++i)
    for (size_t j = 0; j < cols; ++j) neg_t[j][i] = -payoff[i][j];
  auto [neg_value, col] = maximin(neg_t);
  (void)neg_value;
  out.value = value;
  out.row_strategy = std::move(rows);
  out.col_strategy = std::move(col);
  return out;
}

Matrix shapley_stage_matrix(const CompleteInfoGame& game, int s,
                            const std::vector<double>& next_value) {
  const int na = game.attacker_action_counts.at(s);
  const int nd = game.defender_action_counts.at(s);
  Matrix q(na, std::vector<double>(nd, 0.0));
  for (int a = 0; a < na; ++a)
    for (int d = 0; d < nd; ++d)
      for (const auto& o : game.outcomes[s][a][d])
        q[a][d] += o.prob * (o.reward + game.discount * next_value[o.next]);
  return q;
}

ShapleyResult shapley_solve(const CompleteInfoGame& game,
                            const ShapleyOptions& options) {
  const int n = game.num_states();
  ShapleyResult out;
  auto solve_row = [&](const std::vector<double>& next, std::vector<double>& v,
                       std::vector<std::vector<double>>& pa,
                       std::vector<std::vector<double>>& pd) {
    v.assign(n, 0.0);
    pa.assign(n, {});
    pd.assign(n, {});
    for (int s = 0; s < n; ++s) {
      const auto sol = solve_matrix_game(shapley_stage_matrix(game, s, next));
      v[s] = sol.value;
      pa[s] = sol.row_strategy;
      pd[s] = sol.col_strategy;
    }
  };

  if (game.horizon) {
    const int h = *game.horizon;
    out.values.assign(h + 1, std::vector<double>(n, 0.0));
    out.attacker_policy.resize(h);
    out.defender_policy.resize(h);
    for (int t = h - 1; t >= 0; --t) {
      solve_row(out.values[t + 1], out.values[t], out.attacker_policy[t],
                out.defender_policy[t]);
      double delta = 0.0;
      for (int s = 0; s < n; ++s)
        delta = std::max(delta, std::abs(out.values[t][s] - out.values[t + 1][s]));
      out.sweep_deltas.push_back(delta);
    }
    return out;
  }

  std::vector<double> v(n, 0.0), next;
  std::vector<std::vector<double>> pa, pd;
  for (int it = 0; it < options.max_iterations; ++it) {
    solve_row(v, next, pa, pd);
    double delta = 0.0;
    for (int s = 0; s < n; ++s) delta = std::max(delta, std::abs(next[s] - v[s]));
    v.swap(next);
    out.sweep_deltas.push_back(delta);
    if (delta < options.tol) break;
  }
  out.values = {v};
  out.attacker_policy = {pa};
  out.defender_policy = {pd};
  return out;
}

}  // namespace ncirl
