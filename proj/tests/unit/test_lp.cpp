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
#include <cmath>
#include <limits>
#include <optional>

#include "ncirl/errors.hpp"
#include "ncirl/lp.hpp"
#include "ncirl/rng.hpp"

namespace ncirl::lp {
namespace {

constexpr double kTol = 1e-7;

// Vertex enumeration over a tiny LP in the form max c.x, A x <= b, x >= 0.
// Independent of the simplex: every basic solution is solved directly.
struct DenseLp {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;
};

std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> m, std::vector<double> r) {
  const int n = static_cast<int>(r.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
    if (std::abs(m[piv][col]) < 1e-12) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(r[piv], r[col]);
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = m[i][col] / m[col][col];
      for (int j = col; j < n; ++j) m[i][j] -= f * m[col][j];
      r[i] -= f * r[col];
    }
  }
  for (int i = 0; i < n; ++i) r[i] /= m[i][i];
  return r;
}

double brute_force_max(const DenseLp& p) {
  const int n = static_cast<int>(p.c.size());
  const int m = static_cast<int>(p.b.size());
  // Rows: the m constraints then the n bounds -x_j <= 0.
  std::vector<std::vector<double>> rows = p.a;
  std::vector<double> rhs = p.b;
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = -1.0;
    rows.push_back(e);
    rhs.push_back(0.0);
  }
  const int total = m + n;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  // Enumerate n-subsets of rows by bitmask.
  for (int mask = 0; mask < (1 << total); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    std::vector<std::vector<double>> sq;
    std::vector<double> r;
    for (int i = 0; i < total; ++i)
      if (mask & (1 << i)) {
        sq.push_back(rows[i]);
        r.push_back(rhs[i]);
      }
    const auto x = solve_square(sq, r);
    if (!x) continue;
    bool feasible = true;
    for (int i = 0; i < total && feasible; ++i) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += rows[i][j] * (*x)[j];
      feasible = lhs <= rhs[i] + 1e-9;
    }
    if (!feasible) continue;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += p.c[j] * (*x)[j];
    best = std::max(best, obj);
  }
  return best;
}

LpProblem to_problem(const DenseLp& p) {
  LpProblem lp(Sense::kMaximize);
  for (size_t j = 0; j < p.c.size(); ++j) {
    lp.add_variable();
    lp.set_objective(static_cast<int>(j), p.c[j]);
  }
  for (size_t i = 0; i < p.b.size(); ++i) {
    std::vector<Term> terms;
    for (size_t j = 0; j < p.c.size(); ++j) terms.push_back({static_cast<int>(j), p.a[i][j]});
    lp.add_constraint(terms, Relation::kLessEqual, p.b[i]);
  }
  return lp;
}

DenseLp random_bounded_lp(Rng& rng, int n, int m) {
  DenseLp p;
  p.c.resize(n);
  for (double& x : p.c) x = 2.0 * rng.uniform() - 0.5;
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(n);
    for (double& x : row) x = rng.uniform() < 0.2 ? 0.0 : 2.0 * rng.uniform() - 0.3;
    p.a.push_back(row);
    p.b.push_back(0.5 + rng.uniform());
  }
  // A box row keeps the region bounded.
  p.a.push_back(std::vector<double>(n, 1.0));
  p.b.push_back(1.0 + 2.0 * rng.uniform());
  return p;
}

TEST(SolveLp, MaximizeSingleBound) {
  LpProblem p(Sense::kMaximize);
  const int x = p.add_variable(0.0, "x");
  p.set_objective(x, 1.0);
  p.add_constraint({{x, 1.0}}, Relation::kLessEqual, 3.0);
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_NEAR(sol.values[x], 3.0, kTol);
  EXPECT_NEAR(sol.objective_value, 3.0, kTol);
  EXPECT_NEAR(sol.duals[0], 1.0, kTol);
}

TEST(SolveLp, ContradictoryBoundsAreInfeasible) {
  LpProblem p(Sense::kMinimize);
  const int x = p.add_free_variable("x");
  p.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 1.0);
  p.add_constraint({{x, 1.0}}, Relation::kLessEqual, 0.0);
  EXPECT_EQ(solve_lp(p).status, Status::kInfeasible);
}

TEST(SolveLp, UnboundedRay) {
  LpProblem p(Sense::kMaximize);
  const int x = p.add_variable();
  const int y = p.add_variable();
  p.set_objective(x, 1.0);
  p.add_constraint({{x, 1.0}, {y, -1.0}}, Relation::kLessEqual, 1.0);
  EXPECT_EQ(solve_lp(p).status, Status::kUnbounded);
}

TEST(SolveLp, IdentityMatrixGameValueIsOneHalf) {
  // max v s.t. v <= sum_i x_i M[i][j] for each column, sum x = 1.
  LpProblem p(Sense::kMaximize);
  const int v = p.add_free_variable("v");
  const int x0 = p.add_variable();
  const int x1 = p.add_variable();
  p.set_objective(v, 1.0);
  p.add_constraint({{v, 1.0}, {x0, -1.0}}, Relation::kLessEqual, 0.0);
  p.add_constraint({{v, 1.0}, {x1, -1.0}}, Relation::kLessEqual, 0.0);
  p.add_constraint({{x0, 1.0}, {x1, 1.0}}, Relation::kEqual, 1.0);
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_NEAR(sol.objective_value, 0.5, kTol);
  EXPECT_NEAR(sol.values[x0], 0.5, kTol);
  // The column player's mixture is the dual of the two best-response rows.
  EXPECT_NEAR(sol.duals[0], 0.5, kTol);
  EXPECT_NEAR(sol.duals[1], 0.5, kTol);
  EXPECT_NEAR(sol.duals[2], 0.5, kTol);
}

TEST(SolveLp, FreeVariablesAndEqualities) {
  // min x + 2y, x - y = -3, x + y >= 1, y free, x free.
  LpProblem p(Sense::kMinimize);
  const int x = p.add_free_variable();
  const int y = p.add_free_variable();
  p.set_objective(x, 1.0);
  p.set_objective(y, 2.0);
  p.add_constraint({{x, 1.0}, {y, -1.0}}, Relation::kEqual, -3.0);
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::kGreaterEqual, 1.0);
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_NEAR(sol.values[x], -1.0, kTol);
  EXPECT_NEAR(sol.values[y], 2.0, kTol);
  EXPECT_NEAR(sol.objective_value, 3.0, kTol);
}

TEST(SolveLp, MatchesVertexEnumeration) {
  Rng rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const int m = 1 + static_cast<int>(rng.below(5));
    const auto dense = random_bounded_lp(rng, n, m);
    const auto sol = solve_lp(to_problem(dense));
    ASSERT_EQ(sol.status, Status::kOptimal);
    const double ref = brute_force_max(dense);
    EXPECT_NEAR(sol.objective_value, ref, kTol * (1.0 + std::abs(ref))) << "trial " << trial;
  }
}

// Primal feasibility, dual feasibility and a zero duality gap certify the
// reported optimum without any reference solver.
TEST(SolveLp, OptimalityCertificate) {
  Rng rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(8));
    const int m = 2 + static_cast<int>(rng.below(8));
    const auto dense = random_bounded_lp(rng, n, m);
    const auto sol = solve_lp(to_problem(dense));
    ASSERT_EQ(sol.status, Status::kOptimal);
    const int rows = static_cast<int>(dense.b.size());
    double gap = sol.objective_value;
    for (int i = 0; i < rows; ++i) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += dense.a[i][j] * sol.values[j];
      EXPECT_LE(lhs, dense.b[i] + kTol);
      EXPECT_GE(sol.duals[i], -kTol);
      gap -= sol.duals[i] * dense.b[i];
    }
    for (int j = 0; j < n; ++j) {
      EXPECT_GE(sol.values[j], -kTol);
      double reduced = dense.c[j];
      for (int i = 0; i < rows; ++i) reduced -= sol.duals[i] * dense.a[i][j];
      EXPECT_LE(reduced, 1e-6);
    }
    EXPECT_NEAR(gap, 0.0, 1e-6 * (1.0 + std::abs(sol.objective_value)));
    EXPECT_LE(sol.max_primal_residual, kTol);
  }
}

TEST(SolveLp, WeakDualitySpotCheck) {
  // A feasible point built by scaling a random direction into the region
  // never beats the reported optimum.
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const auto dense = random_bounded_lp(rng, n, 4);
    const auto sol = solve_lp(to_problem(dense));
    ASSERT_EQ(sol.status, Status::kOptimal);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x(n);
      for (double& v : x) v = rng.uniform();
      double scale = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < dense.b.size(); ++i) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) lhs += dense.a[i][j] * x[j];
        if (lhs > 0.0) scale = std::min(scale, dense.b[i] / lhs);
      }
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += dense.c[j] * x[j] * scale;
      EXPECT_LE(obj, sol.objective_value + kTol);
    }
  }
}

TEST(SolveLp, DegenerateProblemDoesNotCycle) {
  // Beale's cycling example for the textbook largest-coefficient rule.
  LpProblem p(Sense::kMinimize);
  std::vector<int> x;
  for (int j = 0; j < 4; ++j) x.push_back(p.add_variable());
  p.set_objective(x[0], -0.75);
  p.set_objective(x[1], 150.0);
  p.set_objective(x[2], -0.02);
  p.set_objective(x[3], 6.0);
  p.add_constraint({{x[0], 0.25}, {x[1], -60.0}, {x[2], -0.04}, {x[3], 9.0}}, Relation::kLessEqual, 0.0);
  p.add_constraint({{x[0], 0.5}, {x[1], -90.0}, {x[2], -0.02}, {x[3], 3.0}}, Relation::kLessEqual, 0.0);
  p.add_constraint({{x[2], 1.0}}, Relation::kLessEqual, 1.0);
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, Status::kOptimal);
  EXPECT_NEAR(sol.objective_value, -0.05, 1e-7);
}

TEST(SolveLp, BitwiseDeterministic) {
  Rng rng(99);
  const auto dense = random_bounded_lp(rng, 8, 6);
  const auto p = to_problem(dense);
  const auto a = solve_lp(p);
  const auto b = solve_lp(p);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.duals, b.duals);
  EXPECT_EQ(a.objective_value, b.objective_value);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SolveLp, SolveCountIsPerThread) {
  LpProblem p(Sense::kMaximize);
  const int x = p.add_variable();
  p.set_objective(x, 1.0);
  p.add_constraint({{x, 1.0}}, Relation::kLessEqual, 1.0);
  const long long before = solve_count();
  solve_lp(p);
  solve_lp(p);
  EXPECT_EQ(solve_count() - before, 2);
}

TEST(LpProblem, CheckReportsBadData) {
  LpProblem p;
  const int x = p.add_variable();
  p.add_constraint({{x + 5, 1.0}}, Relation::kLessEqual, 1.0);
  p.add_constraint({{x, std::nan("")}}, Relation::kLessEqual, 1.0);
  EXPECT_EQ(p.check().size(), 2u);
  EXPECT_THROW(solve_lp(p), Error);
}

TEST(LpProblem, LpFormatNamesEverything) {
  LpProblem p(Sense::kMinimize);
  const int x = p.add_variable(0.0, "x");
  const int y = p.add_free_variable("y");
  p.set_objective(x, 2.0);
  p.add_constraint({{x, 1.0}, {y, -1.0}}, Relation::kGreaterEqual, 1.0, "c1");
  const std::string text = p.to_lp_format();
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("c1:"), std::string::npos);
  EXPECT_NE(text.find("y free"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

TEST(SolveLp, IterationCapRaisesNumericalFailure) {
  Rng rng(4);
  const auto dense = random_bounded_lp(rng, 10, 10);
  SolverOptions opt;
  opt.max_iterations = 1;
  EXPECT_THROW(solve_lp(to_problem(dense), opt), NumericalFailure);
}

}  // namespace
}  // namespace ncirl::lp
