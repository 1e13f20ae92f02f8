#pragma once

#include <vector>

#include <Eigen/Dense>

namespace nnpart {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  Eigen::VectorXd normal;
  double offset = 0.0;
  Sense sense = Sense::LessEqual;
};

/// Dense linear program over box-bounded variables. Infinite bounds are
/// allowed; a variable with both bounds infinite is free.
struct LinearProgram {
  Eigen::VectorXd objective;
  std::vector<LinearConstraint> constraints;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  explicit LinearProgram(Eigen::Index dim = 0);

  Eigen::Index dimension() const { return objective.size(); }
  void add(Eigen::VectorXd normal, Sense sense, double offset);
  /// Throws InputError when the invariants (finite coefficients, matching
  /// dimensions, lower <= upper) fail.
  void validate() const;
};

enum class Goal { Maximize, Minimize };

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Eigen::VectorXd point;

  bool optimal() const { return status == LpStatus::Optimal; }
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-11;
  long max_pivots = 0;  // 0 selects a size-dependent default
};

/// Two-phase bounded-variable tableau simplex with Bland's rule, so the
/// returned vertex is a deterministic function of the input.
LpResult solve_lp(const LinearProgram& lp, Goal goal, const LpOptions& options = {});

/// Largest violation of any constraint or bound at `point` (0 when feasible).
double max_violation(const LinearProgram& lp, const Eigen::VectorXd& point);

}  // namespace nnpart
