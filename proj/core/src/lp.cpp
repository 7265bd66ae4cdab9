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

#include "ncirl/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "ncirl/errors.hpp"

namespace ncirl::lp {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-9;
constexpr int kDegenerateStreak = 50;
constexpr int kRepriceRounds = 3;

thread_local long long t_solve_count = 0;

// Tableau over m rows and n structural+slack+artificial columns, stored row
// major with the right-hand side in the last slot of each row.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), w_(cols + 1), a_(static_cast<size_t>(rows) * w_, 0.0),
        z_(w_, 0.0), basis_(rows, -1) {}

  double& at(int i, int j) { return a_[static_cast<size_t>(i) * w_ + j]; }
  double at(int i, int j) const { return a_[static_cast<size_t>(i) * w_ + j]; }
  double& rhs(int i) { return at(i, n_); }
  double rhs(int i) const { return at(i, n_); }
  std::vector<double>& z() { return z_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return m_; }
  int cols() const { return n_; }

  // Reduced costs d_j = c_j - c_B^T B^-1 A_j; z_[n] holds -c_B^T x_B.
  void price(const std::vector<double>& cost) {
    for (int j = 0; j <= n_; ++j) z_[j] = j < n_ ? cost[j] : 0.0;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &a_[static_cast<size_t>(i) * w_];
      for (int j = 0; j <= n_; ++j) z_[j] -= cb * row[j];
    }
    for (int i = 0; i < m_; ++i) z_[basis_[i]] = 0.0;
  }

  void pivot(int r, int q) {
    double* pr = &a_[static_cast<size_t>(r) * w_];
    const double inv = 1.0 / pr[q];
    for (int j = 0; j <= n_; ++j) pr[j] *= inv;
    pr[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* pi = &a_[static_cast<size_t>(i) * w_];
      const double f = pi[q];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) pi[j] -= f * pr[j];
      pi[q] = 0.0;
    }
    const double f = z_[q];
    if (f != 0.0) {
      for (int j = 0; j <= n_; ++j) z_[j] -= f * pr[j];
      z_[q] = 0.0;
    }
    basis_[r] = q;
  }

 private:
  int m_;
  int n_;
  int w_;
  std::vector<double> a_;
  std::vector<double> z_;
  std::vector<int> basis_;
};

enum class PhaseResult { kOptimal, kUnbounded };

void check_iterations(int iterations, const SolverOptions& options) {
  if (iterations >= options.max_iterations) {
    throw NumericalFailure("simplex iteration cap reached");
  }
}

// Primal simplex on a priced, primal-feasible tableau. Columns with
// allowed[j] false never enter.
PhaseResult primal_phase(Tableau& tab, const std::vector<char>& allowed,
                         const SolverOptions& options, int& iterations) {
  const int m = tab.rows();
  const int n = tab.cols();
  int degenerate = 0;
  auto& z = tab.z();
  auto& basis = tab.basis();
  while (true) {
    check_iterations(iterations, options);
    const bool bland = degenerate >= kDegenerateStreak;
    int q = -1;
    double best = -kCostTol;
    for (int j = 0; j < n; ++j) {
      if (!allowed[j] || z[j] >= best) continue;
      q = j;
      if (bland) break;
      best = z[j];
    }
    if (q < 0) return PhaseResult::kOptimal;

    // Harris two-pass ratio test: bound the step with a relaxed feasibility
    // tolerance, then take the largest pivot within that bound.
    double bound = INFINITY;
    for (int i = 0; i < m; ++i) {
      const double a = tab.at(i, q);
      if (a > kPivotTol) bound = std::min(bound, (std::max(tab.rhs(i), 0.0) + kFeasTol) / a);
    }
    if (!std::isfinite(bound)) return PhaseResult::kUnbounded;
    int r = -1;
    for (int i = 0; i < m; ++i) {
      const double a = tab.at(i, q);
      if (a <= kPivotTol || std::max(tab.rhs(i), 0.0) / a > bound) continue;
      if (r < 0 || (bland ? basis[i] < basis[r] : a > tab.at(r, q))) r = i;
    }
    const double step = std::max(tab.rhs(r), 0.0) / tab.at(r, q);
    degenerate = step <= 1e-12 ? degenerate + 1 : 0;
    tab.pivot(r, q);
    for (int i = 0; i < m; ++i)
      if (tab.rhs(i) < 0.0) tab.rhs(i) = 0.0;
    if (!std::isfinite(tab.z()[n])) throw NumericalFailure("non-finite simplex objective");
    ++iterations;
  }
}

// Runs the primal phase until a fresh pricing confirms optimality.
PhaseResult solve_phase(Tableau& tab, const std::vector<double>& cost,
                        const std::vector<char>& allowed,
                        const SolverOptions& options, int& iterations) {
  tab.price(cost);
  for (int round = 0; round < kRepriceRounds; ++round) {
    if (primal_phase(tab, allowed, options, iterations) == PhaseResult::kUnbounded) {
      return PhaseResult::kUnbounded;
    }
    tab.price(cost);
    bool optimal = true;
    for (int j = 0; j < tab.cols() && optimal; ++j) {
      if (allowed[j] && tab.z()[j] < -kCostTol) optimal = false;
    }
    if (optimal) return PhaseResult::kOptimal;
  }
  return PhaseResult::kOptimal;
}

// Dual simplex pivots that restore primal feasibility while keeping the
// reduced costs nonnegative. Returns false if some row proves infeasibility.
bool dual_cleanup(Tableau& tab, const std::vector<char>& allowed,
                  const SolverOptions& options, int& iterations, double tol) {
  const int m = tab.rows();
  const int n = tab.cols();
  auto& z = tab.z();
  while (true) {
    check_iterations(iterations, options);
    int r = -1;
    double worst = -tol;
    for (int i = 0; i < m; ++i) {
      if (tab.rhs(i) < worst) {
        worst = tab.rhs(i);
        r = i;
      }
    }
    if (r < 0) return true;
    int q = -1;
    double best = INFINITY;
    for (int j = 0; j < n; ++j) {
      const double a = tab.at(r, j);
      if (!allowed[j] || a >= -kPivotTol) continue;
      const double ratio = std::max(z[j], 0.0) / -a;
      if (ratio < best - 1e-12 || (ratio <= best + 1e-12 && q >= 0 && -a > -tab.at(r, q))) {
        best = std::min(best, ratio);
        q = j;
      }
    }
    if (q < 0) return false;
    tab.pivot(r, q);
    ++iterations;
  }
}

// Deterministic perturbation factors in [0.5, 1).
double perturb_factor(std::uint64_t& state) {
  state = state * 6364136223846793005ULL + 1442695040888963407ULL;
  return 0.5 + 0.5 * static_cast<double>(state >> 11) * 0x1.0p-53;
}

}  // namespace

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

int LpProblem::add_variable(double lower, std::string name) {
  if (name.empty()) name = "x" + std::to_string(variables_.size());
  variables_.push_back({std::move(name), lower});
  objective_.push_back(0.0);
  return static_cast<int>(variables_.size()) - 1;
}

void LpProblem::set_objective(int var, double coef) {
  objective_.at(var) = coef;
}

int LpProblem::add_constraint(std::vector<Term> terms, Relation relation,
                              double rhs, std::string name) {
  if (name.empty()) name = "c" + std::to_string(constraints_.size());
  constraints_.push_back({std::move(terms), relation, rhs, std::move(name)});
  return static_cast<int>(constraints_.size()) - 1;
}

std::vector<std::string> LpProblem::check() const {
  std::vector<std::string> out;
  for (const auto& v : variables_) {
    if (v.lower != 0.0 && v.lower != -kInfinity) {
      out.push_back("variable " + v.name + " has unsupported lower bound");
    }
  }
  for (size_t j = 0; j < objective_.size(); ++j) {
    if (!std::isfinite(objective_[j])) {
      out.push_back("objective coefficient of " + variables_[j].name +
                    " is not finite");
    }
  }
  for (const auto& c : constraints_) {
    if (!std::isfinite(c.rhs)) out.push_back("rhs of " + c.name + " is not finite");
    for (const auto& t : c.terms) {
      if (t.var < 0 || t.var >= num_variables()) {
        out.push_back("constraint " + c.name + " references undeclared variable");
      } else if (!std::isfinite(t.coef)) {
        out.push_back("constraint " + c.name + " has a non-finite coefficient");
      }
    }
  }
  return out;
}

std::string LpProblem::to_lp_format() const {
  std::ostringstream os;
  os.precision(17);
  auto emit_terms = [&](const std::vector<std::pair<int, double>>& terms) {
    bool first = true;
    for (const auto& [var, coef] : terms) {
      if (coef == 0.0) continue;
      os << (coef < 0 ? " - " : (first ? " " : " + ")) << std::abs(coef) << ' '
         << variables_[var].name;
      first = false;
    }
    if (first) os << " 0 " << (variables_.empty() ? "x" : variables_[0].name);
  };
  os << (sense_ == Sense::kMaximize ? "Maximize\n" : "Minimize\n") << " obj:";
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < num_variables(); ++j) obj.emplace_back(j, objective_[j]);
  emit_terms(obj);
  os << "\nSubject To\n";
  for (const auto& c : constraints_) {
    os << ' ' << c.name << ':';
    std::vector<std::pair<int, double>> terms;
    for (const auto& t : c.terms) terms.emplace_back(t.var, t.coef);
    emit_terms(terms);
    os << (c.relation == Relation::kLessEqual
               ? " <= "
               : c.relation == Relation::kEqual ? " = " : " >= ")
       << c.rhs << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : variables_) {
    if (v.lower == -kInfinity) os << ' ' << v.name << " free\n";
  }
  os << "End\n";
  return os.str();
}

LpSolution DenseSimplexSolver::solve(const LpProblem& problem,
                                     const SolverOptions& options) const {
  if (auto issues = problem.check(); !issues.empty()) {
    throw NumericalFailure("malformed LP: " + issues.front());
  }
  const int nv = problem.num_variables();
  const int m = problem.num_constraints();

  // Structural columns: one per variable, plus a negative twin for free ones.
  std::vector<int> pos_col(nv), neg_col(nv, -1);
  int ncols = 0;
  for (int j = 0; j < nv; ++j) {
    pos_col[j] = ncols++;
    if (problem.variables()[j].lower == -kInfinity) neg_col[j] = ncols++;
  }

  // Normalize rows to nonnegative rhs and assign slack/surplus/artificials.
  std::vector<double> row_sign(m, 1.0);
  std::vector<Relation> rel(m);
  std::vector<int> slack_col(m, -1), art_col(m, -1), unit_col(m, -1);
  for (int i = 0; i < m; ++i) {
    const auto& c = problem.constraints()[i];
    rel[i] = c.relation;
    if (c.rhs < 0.0) {
      row_sign[i] = -1.0;
      if (rel[i] == Relation::kLessEqual) rel[i] = Relation::kGreaterEqual;
      else if (rel[i] == Relation::kGreaterEqual) rel[i] = Relation::kLessEqual;
    }
    if (rel[i] != Relation::kEqual) slack_col[i] = ncols++;
  }
  for (int i = 0; i < m; ++i) {
    if (rel[i] == Relation::kLessEqual) {
      unit_col[i] = slack_col[i];
    } else {
      art_col[i] = ncols++;
      unit_col[i] = art_col[i];
    }
  }

  Tableau tab(m, ncols);
  std::vector<double> b(m);
  double scale = 1.0;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  double perturb_total = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto& c = problem.constraints()[i];
    const double sg = row_sign[i];
    for (const auto& t : c.terms) {
      tab.at(i, pos_col[t.var]) += sg * t.coef;
      if (neg_col[t.var] >= 0) tab.at(i, neg_col[t.var]) -= sg * t.coef;
    }
    if (slack_col[i] >= 0) {
      tab.at(i, slack_col[i]) = rel[i] == Relation::kLessEqual ? 1.0 : -1.0;
    }
    if (art_col[i] >= 0) tab.at(i, art_col[i]) = 1.0;
    b[i] = sg * c.rhs;
    scale = std::max(scale, b[i]);
    const double delta = options.perturbation * (1.0 + b[i]) * perturb_factor(seed);
    perturb_total += delta;
    tab.rhs(i) = b[i] + delta;
    tab.basis()[i] = unit_col[i];
  }

  LpSolution sol;
  std::vector<char> is_art(ncols, 0);
  for (int i = 0; i < m; ++i)
    if (art_col[i] >= 0) is_art[art_col[i]] = 1;
  std::vector<char> all(ncols, 1);
  std::vector<char> no_art(ncols, 1);
  for (int j = 0; j < ncols; ++j) no_art[j] = !is_art[j];

  // Phase 1: drive artificials to zero.
  if (std::any_of(is_art.begin(), is_art.end(), [](char c) { return c; })) {
    std::vector<double> cost1(ncols, 0.0);
    for (int j = 0; j < ncols; ++j) cost1[j] = is_art[j] ? 1.0 : 0.0;
    solve_phase(tab, cost1, all, options, sol.iterations);
    if (-tab.z()[ncols] > options.tol * scale + 2.0 * perturb_total) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    // Pivot artificials out of the basis where a usable column exists.
    for (int i = 0; i < m; ++i) {
      if (!is_art[tab.basis()[i]]) continue;
      int q = -1;
      double best = 1e-7;
      for (int j = 0; j < ncols; ++j) {
        if (is_art[j]) continue;
        if (std::abs(tab.at(i, j)) > best) {
          best = std::abs(tab.at(i, j));
          q = j;
        }
      }
      if (q >= 0) tab.pivot(i, q);
    }
    for (int i = 0; i < m; ++i)
      if (tab.rhs(i) < 0.0) tab.rhs(i) = 0.0;
  }

  // Phase 2 on the minimization form of the objective.
  const double sense_sign = problem.sense() == Sense::kMinimize ? 1.0 : -1.0;
  std::vector<double> cost2(ncols, 0.0);
  for (int j = 0; j < nv; ++j) {
    const double c = sense_sign * problem.objective()[j];
    cost2[pos_col[j]] = c;
    if (neg_col[j] >= 0) cost2[neg_col[j]] = -c;
  }
  if (solve_phase(tab, cost2, no_art, options, sol.iterations) == PhaseResult::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  // Remove the perturbation: x_B = B^-1 b read off the unit columns.
  for (int i = 0; i < m; ++i) {
    double v = 0.0;
    for (int k = 0; k < m; ++k) {
      const double binv = tab.at(i, unit_col[k]);
      if (binv != 0.0) v += binv * b[k];
    }
    tab.rhs(i) = v;
  }
  tab.price(cost2);
  if (!dual_cleanup(tab, no_art, options, sol.iterations, 1e-12 * scale)) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  for (int i = 0; i < m; ++i) {
    if (is_art[tab.basis()[i]] && tab.rhs(i) > options.tol * scale) {
      sol.status = Status::kInfeasible;
      return sol;
    }
  }

  std::vector<double> x(ncols, 0.0);
  for (int i = 0; i < m; ++i) x[tab.basis()[i]] = std::max(tab.rhs(i), 0.0);
  sol.values.assign(nv, 0.0);
  for (int j = 0; j < nv; ++j) {
    double v = x[pos_col[j]];
    if (neg_col[j] >= 0) v -= x[neg_col[j]];
    sol.values[j] = v;
  }
  sol.duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double y = 0.0;
    for (int k = 0; k < m; ++k) {
      const double cb = cost2[tab.basis()[k]];
      if (cb != 0.0) y += cb * tab.at(k, unit_col[i]);
    }
    sol.duals[i] = sense_sign * row_sign[i] * y + 0.0;
  }
  double obj = 0.0;
  for (int j = 0; j < nv; ++j) obj += problem.objective()[j] * sol.values[j];
  sol.objective_value = obj;
  if (!std::isfinite(obj)) throw NumericalFailure("non-finite LP objective");

  double resid = 0.0;
  for (const auto& c : problem.constraints()) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * sol.values[t.var];
    double viol = 0.0;
    if (c.relation == Relation::kLessEqual) viol = lhs - c.rhs;
    else if (c.relation == Relation::kGreaterEqual) viol = c.rhs - lhs;
    else viol = std::abs(lhs - c.rhs);
    resid = std::max(resid, viol);
  }
  sol.max_primal_residual = resid;
  if (resid > options.tol * scale) {
    throw NumericalFailure("LP solution violates constraints by " + std::to_string(resid));
  }
  sol.status = Status::kOptimal;
  return sol;
}

LpSolution solve_lp(const LpProblem& problem, const SolverOptions& options) {
  static const DenseSimplexSolver solver;
  ++t_solve_count;
  return solver.solve(problem, options);
}

long long solve_count() { return t_solve_count; }

}  // namespace ncirl::lp
