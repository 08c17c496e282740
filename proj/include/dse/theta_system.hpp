#pragma once

// Comparison system on the per-subsystem scaling factors theta.
//
// Each estimation-error set is theta_i * S_i.  One step of the coupled error
// dynamics maps these scalings through the nonnegative affine recursion
//    theta+ = T theta + alpha,
// where T has the self contraction factors lambda_i on the diagonal, the
// cross containment factors mu_ij off the diagonal, and alpha_i covers the
// disturbance set.  When T is Schur the scalings settle at
// theta_bar = (I - T)^{-1} alpha.

#include <Eigen/Dense>

#include "dse/convex_body.hpp"
#include "dse/tolerances.hpp"

namespace dse {

// Containment factor of (abar_ij * s_from) in s_into: how much subsystem j's
// scaled error can inflate subsystem i's scaling per step.  A block that is
// exactly zero contributes exactly 0 (no LP involved).
double compute_mu(const Eigen::MatrixXd& abar_ij, const ConvexBody& s_from,
                  const ConvexBody& s_into, const Tolerances& tol = default_tolerances());

// Containment factor of (d * disturbance_set) in s; exactly 0 for a singleton
// origin disturbance set.
double compute_alpha(const Eigen::MatrixXd& d, const ConvexBody& disturbance_set,
                     const ConvexBody& s, const Tolerances& tol = default_tolerances());

// Largest admissible scaling: max { t : t * s inside region }.
double compute_theta_tilde(const ConvexBody& s, const class HPolytope& region);

struct ThetaSystem {
  Eigen::MatrixXd t;            // M x M, entrywise nonnegative
  Eigen::VectorXd alpha;        // M, nonnegative
  Eigen::VectorXd theta_tilde;  // M, strictly positive admissible caps
  double rho = 0;               // spectral radius of t
  Eigen::VectorXd theta_bar;    // equilibrium; empty when rho >= 1

  int size() const { return static_cast<int>(alpha.size()); }
};

// Validates shapes and signs, computes the spectral radius and (when Schur)
// the equilibrium.
ThetaSystem assemble_theta_system(const Eigen::MatrixXd& t, const Eigen::VectorXd& alpha,
                                  const Eigen::VectorXd& theta_tilde,
                                  const Tolerances& tol = default_tolerances());

}  // namespace dse
