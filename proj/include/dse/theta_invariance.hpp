#pragma once

// Maximal constraint-admissible invariant set of the scaling-factor recursion
// theta+ = T theta + alpha inside the box [0, theta_tilde], and the largest
// weighted box inscribed in it.
//
// Because T and alpha are nonnegative the set is a lower set of the positive
// orthant: it is cut out by finitely many rows  (e_i' T^k) theta <= r_{k,i}
// with r_{k,i} = theta_tilde_i - e_i' (sum_{j<k} T^j) alpha.  New rows are
// added until every next-step row is already implied (checked by LP), which
// happens after finitely many steps whenever T is Schur and the equilibrium
// is strictly inside the box.

#include <Eigen/Dense>

#include "dse/theta_system.hpp"
#include "dse/tolerances.hpp"

namespace dse {

struct ThetaInvariantSet {
  Eigen::MatrixXd row_normals;  // R x M, entrywise nonnegative
  Eigen::VectorXd row_rhs;      // R, strictly positive
  int k_star = 0;               // determination index: rows cover steps 0..k_star

  int size() const { return static_cast<int>(row_normals.cols()); }

  // True iff theta >= 0 satisfies every row within slack.
  bool contains(const Eigen::VectorXd& theta, double slack = 1e-9) const;
};

// Requires rho(T) < 1 and theta_bar strictly below theta_tilde (margin
// tol.interior_margin); throws InteriorViolation otherwise, and
// KStarCapExceeded if determination needs more than tol.k_star_cap steps.
ThetaInvariantSet maximal_invariant_set(const ThetaSystem& ts,
                                        const Tolerances& tol = default_tolerances());

// max of direction . theta over the set intersected with the positive
// orthant; throws when that value is unbounded.
double region_support(const ThetaInvariantSet& inv, const Eigen::VectorXd& direction,
                      const Tolerances& tol = default_tolerances());

// Corner of the largest inscribed box with per-axis weights 1/m_i, where m_i
// is the largest value of theta_i inside the set (axes pinned to zero get
// weight 1).  Ties are broken lexicographically: among maximizers of the
// weighted sum, theta_1 is maximized, then theta_2, and so on.  The box
// [0, corner] is entirely inside the set.
Eigen::VectorXd inner_box_corner(const ThetaInvariantSet& inv,
                                 const Tolerances& tol = default_tolerances());

}  // namespace dse
