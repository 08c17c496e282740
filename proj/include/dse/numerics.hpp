#pragma once

// Small dense linear-algebra helpers shared by the set and observer layers.
// Everything is double precision on Eigen dynamic matrices.

#include <Eigen/Dense>

#include "dse/tolerances.hpp"

namespace dse {

// Throws NonFinite when the matrix contains NaN or infinity.
void require_finite(const Eigen::MatrixXd& m, const char* label);

// Largest eigenvalue magnitude, computed from the full (real) eigenvalue
// decomposition.  Throws on non-square or non-finite input.
double spectral_radius(const Eigen::MatrixXd& m,
                       const Tolerances& tol = default_tolerances());

// Solves A x = b for square A.  Throws SingularMatrix when the condition
// number estimate exceeds tol.condition_limit or the residual check fails.
Eigen::VectorXd solve_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                             const Tolerances& tol = default_tolerances());

// Moore-Penrose pseudo-inverse via SVD with a relative singular-value cutoff.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m,
                               const Tolerances& tol = default_tolerances());

// exp(M) by scaling and squaring with a Pade approximant.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m);

// M^k for k >= 0 by repeated multiplication.
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int k);

// Numerical rank from singular values with a relative cutoff.
int numerical_rank(const Eigen::MatrixXd& m,
                   const Tolerances& tol = default_tolerances());

}  // namespace dse
