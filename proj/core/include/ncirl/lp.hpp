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

#pragma once

#include <limits>
#include <string>
#include <vector>

namespace ncirl::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status status);

struct Term {
  int var = 0;
  double coef = 0.0;
};

/// Lower bound is 0 or -infinity; every upper bound is +infinity.
struct Variable {
  std::string name;
  double lower = 0.0;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

class LpProblem {
 public:
  explicit LpProblem(Sense sense = Sense::kMaximize) : sense_(sense) {}

  int add_variable(double lower = 0.0, std::string name = {});
  int add_free_variable(std::string name = {}) {
    return add_variable(-kInfinity, std::move(name));
  }
  void set_objective(int var, double coef);
  int add_constraint(std::vector<Term> terms, Relation relation, double rhs,
                     std::string name = {});

  Sense sense() const { return sense_; }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  /// Invariant violations (undeclared variables, non-finite data, bad bounds).
  std::vector<std::string> check() const;

  /// CPLEX LP text format, for cross-checking against external solvers.
  std::string to_lp_format() const;

 private:
  Sense sense_;
  std::vector<Variable> variables_;
  std::vector<double> objective_;
  std::vector<Constraint> constraints_;
};

struct LpSolution {
  Status status = Status::kInfeasible;
  double objective_value = 0.0;
  std::vector<double> values;
  /// d(objective)/d(rhs) per constraint, in the problem's own sense.
  std::vector<double> duals;
  int iterations = 0;
  double max_primal_residual = 0.0;
};

struct SolverOptions {
  double tol = 1e-7;
  int max_iterations = 200000;
  /// Relative right-hand-side perturbation used while pivoting; removed
  /// before the solution is reported.
  double perturbation = 1e-7;
};

/// Solver adapter seam: the rest of the library only sees this contract.
class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual LpSolution solve(const LpProblem& problem,
                           const SolverOptions& options) const = 0;
};

/// Dense two-phase tableau simplex on a perturbed right-hand side, with a
/// Harris ratio test and Dantzig pricing that falls back to Bland's rule after
/// a run of degenerate pivots. The exact right-hand side is restored at the
/// end and any residual infeasibility is removed by dual simplex pivots.
class DenseSimplexSolver final : public LpSolver {
 public:
  LpSolution solve(const LpProblem& problem,
                   const SolverOptions& options) const override;
};

/// Solves with the embedded dense simplex. Throws NumericalFailure when the
/// iteration cap is reached or the arithmetic breaks down.
LpSolution solve_lp(const LpProblem& problem, const SolverOptions& options = {});

/// Number of solve_lp calls made on the calling thread.
long long solve_count();

}  // namespace ncirl::lp
