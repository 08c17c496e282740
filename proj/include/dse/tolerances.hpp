#pragma once

// Central numeric tolerance configuration.  Every routine that needs a
// threshold takes a Tolerances (defaulting to default_tolerances()) so tests
// and callers can tighten or relax behaviour in one place.

#include <cstddef>

namespace dse {

struct Tolerances {
  // Simplex: primal feasibility / pivot magnitude and reduced-cost cutoffs.
  double lp_feasibility = 1e-9;
  double lp_reduced_cost = 1e-9;
  // Pivot budget before giving up, and the pivot count after which the solver
  // switches from largest-coefficient pricing to Bland's rule.
  int lp_pivot_cap = 200000;
  int lp_bland_after = 5000;

  // Relative singular-value cutoff for rank decisions (observability tests,
  // pseudo-inverses).
  double rank_cutoff = 1e-9;

  // Condition-number limit beyond which solve_linear refuses to answer.
  double condition_limit = 1e12;
  // Residual bound ||Ax - b||_inf <= solve_residual * (1 + ||b||_inf).
  double solve_residual = 1e-9;

  // Facet checks: generator g satisfies row h when h.g <= 1 + containment_slack.
  double containment_slack = 1e-9;
  // Generator pruning drops a point when its gauge w.r.t. the others is
  // <= 1 + prune_slack.
  double prune_slack = 1e-9;
  // Minkowski sums prune automatically once the raw product exceeds this.
  std::size_t minkowski_prune_threshold = 512;

  // Deadbeat check: ||(A + L C)^n||_F <= nilpotent_slack * (1 + ||A||_F)^n.
  double nilpotent_slack = 1e-8;
  // Cross gains with ||L_ij||_F below this are considered zero when revising
  // the coupling switches.
  double zero_gain = 1e-10;

  // Slack allowed on the contraction-factor postcondition lambda.
  double lambda_slack = 1e-8;

  // Strict interior margin required of the equilibrium scaling vector, and the
  // improvement threshold that declares a candidate constraint row redundant.
  double interior_margin = 1e-9;
  double row_redundancy = 1e-9;
  // Hard cap on the finite-determination index.
  int k_star_cap = 1000;

  // Slack used by invariance verification and simulation monitoring when
  // comparing gauges against scaling factors.
  double gauge_slack = 1e-7;
  // Slack for membership of a scaling vector in the invariant set rows.
  double row_slack = 1e-9;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace dse
