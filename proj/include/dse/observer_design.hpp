#pragma once

// Estimator gain synthesis for one subsystem and its couplings.
//
// design_deadbeat_gain returns L with (A + L C) nilpotent, so the local error
// dynamics die in at most n steps.  The construction works on the dual pair
// (A^T, C^T): a chain of n independent states x_{t+1} = F x_t + G u_t is grown
// greedily (Heymann's lemma), reducing the problem to a single-input pole
// placement solved by Ackermann's formula for the all-zero characteristic
// polynomial.  Everything is deterministic: candidate inputs are scanned in a
// fixed order and ties resolve to the lowest index.

#include <map>

#include <Eigen/Dense>

#include "dse/convex_body.hpp"
#include "dse/tolerances.hpp"

namespace dse {

// Local and cross measurement gains for one subsystem.
struct EstimatorGains {
  Eigen::MatrixXd self;                  // L_ii, n_i x p_i
  std::map<int, Eigen::MatrixXd> cross;  // L_ij, n_i x p_j per coupled neighbor
  std::map<int, int> delta;              // measurement-exchange switch per neighbor
};

// Rank of [C; CA; ...; C A^(n-1)] under the configured cutoff.
int observability_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c,
                       const Tolerances& tol = default_tolerances());

// Throws NotObservable (with the achieved rank) when the pair is not
// observable; otherwise (A + L C)^n vanishes up to roundoff.
Eigen::MatrixXd design_deadbeat_gain(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& c,
                                     const Tolerances& tol = default_tolerances());

enum class CouplingMode { Frobenius, DirectMu };

const char* to_string(CouplingMode mode);

// Cross gain L_ij attacking the coupling block A_ij through neighbor
// measurements y_j = C_j x_j.
//
//  Frobenius: L_ij = -A_ij pinv(C_j), the unique Frobenius-norm minimizer of
//             ||A_ij + L C_j||_F.
//  DirectMu:  joint LP over L and per-generator cone weights minimizing the
//             containment factor of (A_ij + L C_j) S_j in S_i directly; never
//             worse than Frobenius in that measure.  Requires both bodies.
Eigen::MatrixXd design_coupling_gain(const Eigen::MatrixXd& a_ij,
                                     const Eigen::MatrixXd& c_j,
                                     CouplingMode mode,
                                     const ConvexBody* s_j = nullptr,
                                     const ConvexBody* s_i = nullptr,
                                     const Tolerances& tol = default_tolerances());

// Closed-loop error blocks: self block A_ii + L_ii C_i, cross block
// A_ij + delta * L_ij C_j.
Eigen::MatrixXd error_block_self(const Eigen::MatrixXd& a_ii,
                                 const Eigen::MatrixXd& l_ii,
                                 const Eigen::MatrixXd& c_i);
Eigen::MatrixXd error_block_cross(const Eigen::MatrixXd& a_ij, int delta,
                                  const Eigen::MatrixXd& l_ij,
                                  const Eigen::MatrixXd& c_j);

// Drops the measurement exchange (returns 0) when the designed cross gain is
// numerically zero; otherwise keeps the current switch value.
int suggest_delta_revision(const Eigen::MatrixXd& l_ij, int delta,
                           const Tolerances& tol = default_tolerances());

}  // namespace dse
