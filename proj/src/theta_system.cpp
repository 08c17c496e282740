#include "dse/theta_system.hpp"

#include <string>

#include "dse/errors.hpp"
#include "dse/h_polytope.hpp"
#include "dse/numerics.hpp"

namespace dse {

double compute_mu(const Eigen::MatrixXd& abar_ij, const ConvexBody& s_from,
                  const ConvexBody& s_into, const Tolerances& tol) {
  if (abar_ij.cols() != s_from.dim())
    throw DimensionMismatch("compute_mu: map does not accept the source set");
  if (abar_ij.rows() != s_into.dim())
    throw DimensionMismatch("compute_mu: map does not land in the target set's space");
  require_finite(abar_ij, "compute_mu: map");
  if (abar_ij.isZero(0.0)) return 0.0;
  return containment_factor(linear_image(abar_ij, s_from), s_into, tol);
}

double compute_alpha(const Eigen::MatrixXd& d, const ConvexBody& disturbance_set,
                     const ConvexBody& s, const Tolerances& tol) {
  if (d.cols() != disturbance_set.dim())
    throw DimensionMismatch("compute_alpha: map does not accept the disturbance set");
  if (d.rows() != s.dim())
    throw DimensionMismatch("compute_alpha: map does not land in the set's space");
  require_finite(d, "compute_alpha: map");
  if (disturbance_set.is_singleton_origin()) return 0.0;
  return containment_factor(linear_image(d, disturbance_set), s, tol);
}

double compute_theta_tilde(const ConvexBody& s, const HPolytope& region) {
  const double stretch = h_stretch(s, region);
  if (!(stretch > 1e-300))
    throw NotACSet("compute_theta_tilde: set has no extent against the region");
  return 1.0 / stretch;
}

ThetaSystem assemble_theta_system(const Eigen::MatrixXd& t, const Eigen::VectorXd& alpha,
                                  const Eigen::VectorXd& theta_tilde, const Tolerances& tol) {
  const int m = static_cast<int>(alpha.size());
  if (t.rows() != m || t.cols() != m)
    throw DimensionMismatch("assemble_theta_system: matrix is " + std::to_string(t.rows()) + "x" +
                            std::to_string(t.cols()) + " but alpha has " + std::to_string(m) +
                            " entries");
  if (theta_tilde.size() != m)
    throw DimensionMismatch("assemble_theta_system: theta_tilde size does not match alpha");
  if (m == 0) throw Error("assemble_theta_system: empty system");
  require_finite(t, "assemble_theta_system: matrix");
  require_finite(alpha, "assemble_theta_system: alpha");
  require_finite(theta_tilde, "assemble_theta_system: theta_tilde");
  if ((t.array() < 0).any())
    throw ModelError("assemble_theta_system: matrix must be entrywise nonnegative");
  if ((alpha.array() < 0).any())
    throw ModelError("assemble_theta_system: alpha must be entrywise nonnegative");
  if ((theta_tilde.array() <= 0).any())
    throw ModelError("assemble_theta_system: theta_tilde must be strictly positive");

  ThetaSystem ts;
  ts.t = t;
  ts.alpha = alpha;
  ts.theta_tilde = theta_tilde;
  ts.rho = spectral_radius(t);
  if (ts.rho < 1.0)
    ts.theta_bar = solve_linear(Eigen::MatrixXd::Identity(m, m) - t, alpha, tol);
  return ts;
}

}  // namespace dse
