#pragma once

// Dense linear programming.  Problems are stated as
//
//   maximize  objective . x
//   s.t.      eq_lhs   x  =  eq_rhs
//             ineq_lhs x  <= ineq_rhs
//             x_j >= lower_bounds[j]   (only where a bound is present)
//
// Variables without a lower bound are free.  Upper bounds are expressed as
// inequality rows.  The solver is a two-phase primal simplex on the revised
// tableau with an explicitly maintained basis inverse; pricing uses the
// largest-reduced-cost rule and falls back to Bland's rule after
// lp_bland_after pivots so cycling cannot persist.  All scan orders and tie
// breaks are fixed, so the solver is deterministic.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dse/tolerances.hpp"

namespace dse {

struct LpProblem {
  Eigen::VectorXd objective;

  Eigen::MatrixXd eq_lhs;    // may have zero rows
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_lhs;  // may have zero rows
  Eigen::VectorXd ineq_rhs;

  // Empty vector = all variables free; otherwise one entry per variable.
  std::vector<std::optional<double>> lower_bounds;

  int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;       // meaningful only when status == Optimal
  Eigen::VectorXd x;        // ditto
  int pivots = 0;
};

const char* to_string(LpStatus status);

// Throws DimensionMismatch / NonFinite on malformed input and
// CycleLimitExceeded when the pivot budget runs out.
LpOutcome solve_lp(const LpProblem& problem,
                   const Tolerances& tol = default_tolerances());

// Convenience builders used throughout the set machinery.
LpProblem make_lp(const Eigen::VectorXd& objective);

}  // namespace dse
