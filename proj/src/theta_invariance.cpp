#include "dse/theta_invariance.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dse/errors.hpp"
#include "dse/lp.hpp"

namespace dse {

bool ThetaInvariantSet::contains(const Eigen::VectorXd& theta, double slack) const {
  if (theta.size() != row_normals.cols()) return false;
  if ((theta.array() < -slack).any()) return false;
  const Eigen::VectorXd values = row_normals * theta;
  return ((values - row_rhs).array() <= slack).all();
}

namespace {

// max of direction . theta over the current row set intersected with the
// positive orthant.
LpOutcome row_max(const Eigen::MatrixXd& normals, const Eigen::VectorXd& rhs,
                  const Eigen::MatrixXd& extra_lhs, const Eigen::VectorXd& extra_rhs,
                  const Eigen::VectorXd& direction, const Tolerances& tol) {
  LpProblem p;
  p.objective = direction;
  const int extra = static_cast<int>(extra_rhs.size());
  p.ineq_lhs.resize(normals.rows() + extra, normals.cols());
  p.ineq_lhs.topRows(normals.rows()) = normals;
  p.ineq_rhs.resize(rhs.size() + extra);
  p.ineq_rhs.head(rhs.size()) = rhs;
  if (extra > 0) {
    p.ineq_lhs.bottomRows(extra) = extra_lhs;
    p.ineq_rhs.tail(extra) = extra_rhs;
  }
  p.lower_bounds.assign(static_cast<std::size_t>(normals.cols()),
                        std::optional<double>(0.0));
  return solve_lp(p, tol);
}

}  // namespace

ThetaInvariantSet maximal_invariant_set(const ThetaSystem& ts, const Tolerances& tol) {
  const int m = ts.size();
  if (m == 0) throw Error("maximal_invariant_set: empty system");
  if (!(ts.rho < 1.0))
    throw Error("maximal_invariant_set: recursion matrix is not Schur (rho " +
                std::to_string(ts.rho) + ")");
  if (ts.theta_bar.size() != m)
    throw Error("maximal_invariant_set: system is missing its equilibrium");
  for (int i = 0; i < m; ++i)
    if (!(ts.theta_bar(i) <= ts.theta_tilde(i) - tol.interior_margin))
      throw InteriorViolation("maximal_invariant_set: equilibrium component " + std::to_string(i) +
                              " (" + std::to_string(ts.theta_bar(i)) +
                              ") is not strictly below its cap " +
                              std::to_string(ts.theta_tilde(i)));

  const Eigen::MatrixXd none_lhs(0, m);
  const Eigen::VectorXd none_rhs(0);

  // Step-0 rows are the box caps theta_i <= theta_tilde_i.
  Eigen::MatrixXd normals = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = ts.theta_tilde;

  Eigen::MatrixXd power = ts.t;                        // T^(k+1) while probing step k+1
  Eigen::VectorXd drift = ts.alpha;                    // sum_{j<k+1} T^j alpha
  int k = 0;
  while (true) {
    bool all_redundant = true;
    for (int i = 0; i < m && all_redundant; ++i) {
      const Eigen::VectorXd cand = power.row(i).transpose();
      const double cand_rhs = ts.theta_tilde(i) - drift(i);
      if (cand_rhs <= 0)
        throw Error("maximal_invariant_set: accumulated drift exceeded a cap; "
                    "equilibrium margin too thin for reliable determination");
      if (cand.lpNorm<Eigen::Infinity>() <= 1e-15) continue;
      const LpOutcome best = row_max(normals, rhs, none_lhs, none_rhs, cand, tol);
      if (best.status != LpStatus::Optimal)
        throw Error("maximal_invariant_set: row probe LP did not solve");
      if (best.value > cand_rhs + tol.row_redundancy) all_redundant = false;
    }
    if (all_redundant) break;

    // Append all rows of the next step and advance.
    const int old_rows = static_cast<int>(normals.rows());
    normals.conservativeResize(old_rows + m, Eigen::NoChange);
    rhs.conservativeResize(old_rows + m);
    normals.bottomRows(m) = power;
    rhs.tail(m) = ts.theta_tilde - drift;
    ++k;
    if (k > tol.k_star_cap)
      throw KStarCapExceeded("maximal_invariant_set: not determined after " +
                             std::to_string(tol.k_star_cap) + " steps");
    drift += power * ts.alpha;
    power = power * ts.t;
  }

  ThetaInvariantSet out;
  out.row_normals = normals;
  out.row_rhs = rhs;
  out.k_star = k;
  return out;
}

double region_support(const ThetaInvariantSet& inv, const Eigen::VectorXd& direction,
                      const Tolerances& tol) {
  if (direction.size() != inv.size())
    throw DimensionMismatch("region_support: direction dimension does not match the set");
  const Eigen::MatrixXd none_lhs(0, inv.size());
  const Eigen::VectorXd none_rhs(0);
  const LpOutcome out = row_max(inv.row_normals, inv.row_rhs, none_lhs, none_rhs, direction, tol);
  if (out.status != LpStatus::Optimal)
    throw Error("region_support: direction is unbounded over the set");
  return out.value;
}

Eigen::VectorXd inner_box_corner(const ThetaInvariantSet& inv, const Tolerances& tol) {
  const int m = inv.size();
  if (m == 0) throw Error("inner_box_corner: empty set");
  const Eigen::MatrixXd none_lhs(0, m);
  const Eigen::VectorXd none_rhs(0);

  // Per-axis reach; axes the set pins to zero get weight 1.
  Eigen::VectorXd weights(m);
  for (int i = 0; i < m; ++i) {
    const LpOutcome best =
        row_max(inv.row_normals, inv.row_rhs, none_lhs, none_rhs, Eigen::VectorXd::Unit(m, i), tol);
    if (best.status != LpStatus::Optimal)
      throw Error("inner_box_corner: axis " + std::to_string(i) + " is unbounded or infeasible");
    weights(i) = best.value < 1e-12 ? 1.0 : 1.0 / best.value;
  }

  // Maximize the weighted sum, then settle ties lexicographically by pinning
  // each achieved value with a slightly relaxed cut before maximizing the
  // next axis.
  Eigen::MatrixXd cuts(0, m);
  Eigen::VectorXd cut_rhs(0);
  Eigen::VectorXd corner;
  Eigen::VectorXd objective = weights;
  for (int round = 0; round <= m; ++round) {
    const LpOutcome best = row_max(inv.row_normals, inv.row_rhs, cuts, cut_rhs, objective, tol);
    if (best.status != LpStatus::Optimal) throw Error("inner_box_corner: tie-break LP did not solve");
    corner = best.x;
    const double eps = 1e-10 * (1.0 + std::abs(best.value));
    cuts.conservativeResize(cuts.rows() + 1, Eigen::NoChange);
    cut_rhs.conservativeResize(cut_rhs.size() + 1);
    cuts.bottomRows(1) = -objective.transpose();
    cut_rhs(cut_rhs.size() - 1) = -(best.value - eps);
    if (round < m) objective = Eigen::VectorXd::Unit(m, round);
  }

  corner = corner.cwiseMax(0.0);
  if (!inv.contains(corner, tol.row_slack))
    throw Error("inner_box_corner: corner failed the membership check");
  return corner;
}

}  // namespace dse
