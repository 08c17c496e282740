#include "dse/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dse/errors.hpp"
#include "dse/lp.hpp"
#include "dse/rng.hpp"

namespace dse {

ConvexBody::ConvexBody(Eigen::MatrixXd generators) : gens_(std::move(generators)) {
  if (gens_.cols() < 1 || gens_.rows() < 1) {
    throw DimensionMismatch("ConvexBody: need at least one generator");
  }
  if (!gens_.allFinite()) {
    throw NonFinite("ConvexBody: non-finite generator");
  }
}

ConvexBody ConvexBody::axis_box(const Eigen::VectorXd& radii) {
  const int n = static_cast<int>(radii.size());
  if (n < 1) throw DimensionMismatch("axis_box: empty radii");
  if (n > 20) throw DimensionMismatch("axis_box: dimension too large for corner enumeration");
  if ((radii.array() < 0.0).any()) throw NegativeScale("axis_box: negative radius");
  const int corners = 1 << n;
  Eigen::MatrixXd g(n, corners);
  for (int mask = 0; mask < corners; ++mask) {
    for (int j = 0; j < n; ++j) {
      g(j, mask) = (mask >> j) & 1 ? radii[j] : -radii[j];
    }
  }
  return ConvexBody(g);
}

ConvexBody ConvexBody::origin(int dim) {
  return ConvexBody(Eigen::MatrixXd::Zero(dim, 1));
}

bool ConvexBody::is_singleton_origin(double eps) const {
  return gens_.cwiseAbs().maxCoeff() <= eps;
}

namespace {

// min sum(c) s.t. gens c = x, c >= 0.  Returns +infinity when infeasible.
double gauge_lp(const Eigen::MatrixXd& gens, const Eigen::VectorXd& x,
                const Tolerances& tol) {
  LpProblem p = make_lp(Eigen::VectorXd::Constant(gens.cols(), -1.0));
  p.eq_lhs = gens;
  p.eq_rhs = x;
  p.lower_bounds.assign(gens.cols(), 0.0);
  const LpOutcome out = solve_lp(p, tol);
  if (out.status != LpStatus::Optimal) {
    return std::numeric_limits<double>::infinity();
  }
  return std::max(0.0, -out.value);
}

}  // namespace

double gauge(const ConvexBody& body, const Eigen::VectorXd& x,
             const Tolerances& tol) {
  if (x.size() != body.dim()) {
    throw DimensionMismatch("gauge: point dimension mismatch");
  }
  if (!x.allFinite()) throw NonFinite("gauge: non-finite point");
  if (x.isZero(0.0)) return 0.0;
  const double value = gauge_lp(body.generators(), x, tol);
  if (std::isinf(value) && !origin_in_hull(body, tol)) {
    throw NotACSet("gauge: origin is not in the hull of the generators");
  }
  return value;
}

double support(const ConvexBody& body, const Eigen::VectorXd& direction) {
  if (direction.size() != body.dim()) {
    throw DimensionMismatch("support: direction dimension mismatch");
  }
  return (direction.transpose() * body.generators()).maxCoeff();
}

bool origin_in_hull(const ConvexBody& body, const Tolerances& tol) {
  const int k = body.count();
  LpProblem p = make_lp(Eigen::VectorXd::Zero(k));
  p.eq_lhs.resize(body.dim() + 1, k);
  p.eq_lhs.topRows(body.dim()) = body.generators();
  p.eq_lhs.bottomRows(1).setOnes();
  p.eq_rhs = Eigen::VectorXd::Zero(body.dim() + 1);
  p.eq_rhs[body.dim()] = 1.0;
  p.lower_bounds.assign(k, 0.0);
  return solve_lp(p, tol).status == LpStatus::Optimal;
}

ConvexBody linear_image(const Eigen::MatrixXd& m, const ConvexBody& body) {
  if (m.cols() != body.dim()) {
    throw DimensionMismatch("linear_image: matrix column count mismatch");
  }
  if (!m.allFinite()) throw NonFinite("linear_image: non-finite matrix");
  return ConvexBody(m * body.generators());
}

ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b,
                         const Tolerances& tol) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("minkowski_sum: dimension mismatch");
  }
  const int ka = a.count(), kb = b.count();
  Eigen::MatrixXd g(a.dim(), static_cast<Eigen::Index>(ka) * kb);
  Eigen::Index col = 0;
  for (int i = 0; i < ka; ++i) {
    for (int j = 0; j < kb; ++j) {
      g.col(col++) = a.generators().col(i) + b.generators().col(j);
    }
  }
  ConvexBody sum{std::move(g)};
  if (static_cast<std::size_t>(sum.count()) > tol.minkowski_prune_threshold) {
    return prune_generators(sum, tol);
  }
  return sum;
}

ConvexBody scale(const ConvexBody& body, double t) {
  if (!(t >= 0.0)) throw NegativeScale("scale: factor must be nonnegative");
  return ConvexBody(body.generators() * t);
}

namespace {

// True when x lies within eps (infinity norm) of the hull of the selected
// columns.  Feasibility LP over convex weights plus a bounded residual; exact
// duplicates and degenerate bodies are handled, and a genuine vertex is never
// reported as inside.
bool near_hull_of_subset(const Eigen::MatrixXd& gens,
                         const std::vector<int>& cols, int skip,
                         const Eigen::VectorXd& x, double eps,
                         const Tolerances& tol) {
  const int n = static_cast<int>(gens.rows());
  Eigen::MatrixXd sub(n, cols.size());
  Eigen::Index kk = 0;
  for (int idx : cols) {
    if (idx == skip) continue;
    sub.col(kk++) = gens.col(idx);
  }
  if (kk == 0) return false;
  const int k = static_cast<int>(kk);

  // Variables: k convex weights, then n residual components.
  LpProblem p = make_lp(Eigen::VectorXd::Zero(k + n));
  p.eq_lhs = Eigen::MatrixXd::Zero(n + 1, k + n);
  p.eq_lhs.topLeftCorner(n, k) = sub.leftCols(k);
  p.eq_lhs.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  p.eq_lhs.row(n).head(k).setOnes();
  p.eq_rhs.resize(n + 1);
  p.eq_rhs.head(n) = x;
  p.eq_rhs[n] = 1.0;
  p.ineq_lhs = Eigen::MatrixXd::Zero(2 * n, k + n);
  p.ineq_rhs = Eigen::VectorXd::Constant(2 * n, eps);
  for (int j = 0; j < n; ++j) {
    p.ineq_lhs(2 * j, k + j) = 1.0;
    p.ineq_lhs(2 * j + 1, k + j) = -1.0;
  }
  p.lower_bounds.assign(k + n, std::nullopt);
  for (int j = 0; j < k; ++j) p.lower_bounds[j] = 0.0;
  return solve_lp(p, tol).status == LpStatus::Optimal;
}

}  // namespace

ConvexBody prune_generators(const ConvexBody& body, const Tolerances& tol) {
  const Eigen::MatrixXd& g = body.generators();
  const int k = body.count();
  const int n = body.dim();
  if (k <= 1) return body;

  // Certain vertices first: the lexicographically largest maximizer in any
  // direction is a hull vertex.  Axis directions plus a fixed batch of random
  // ones seed the keeper set.
  std::vector<Eigen::VectorXd> dirs;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    d[j] = 1.0;
    dirs.push_back(d);
    dirs.push_back(-d);
  }
  Rng rng(0x7a31c5u);
  for (int r = 0; r < 128; ++r) {
    Eigen::VectorXd d = rng.gaussian(n);
    if (d.norm() > 1e-12) dirs.push_back(d / d.norm());
  }

  std::vector<char> keeper(k, 0);
  for (const Eigen::VectorXd& d : dirs) {
    const Eigen::RowVectorXd vals = d.transpose() * g;
    const double best = vals.maxCoeff();
    int pick = -1;
    for (int c = 0; c < k; ++c) {
      if (vals[c] < best - 1e-12 * (1.0 + std::abs(best))) continue;
      if (pick < 0) {
        pick = c;
        continue;
      }
      // Lexicographic comparison of the points themselves.
      for (int j = 0; j < n; ++j) {
        const double diff = g(j, c) - g(j, pick);
        if (diff > 0.0) {
          pick = c;
          break;
        }
        if (diff < 0.0) break;
      }
    }
    if (pick >= 0) keeper[pick] = 1;
  }

  std::vector<int> keeper_idx;
  for (int c = 0; c < k; ++c) {
    if (keeper[c]) keeper_idx.push_back(c);
  }

  const double scale_ref = 1.0 + g.cwiseAbs().maxCoeff();

  // Coarse filter against the keeper hull.
  std::vector<int> survivors;
  for (int c = 0; c < k; ++c) {
    if (keeper[c]) {
      survivors.push_back(c);
      continue;
    }
    if (!near_hull_of_subset(g, keeper_idx, -1, g.col(c),
                             tol.prune_slack * scale_ref, tol)) {
      survivors.push_back(c);
    }
  }

  // Exact sequential pass over the survivors, keepers included, so duplicated
  // vertices collapse to a single copy.
  std::vector<int> alive = survivors;
  for (int idx : survivors) {
    if (alive.size() <= 1) break;
    if (near_hull_of_subset(g, alive, idx, g.col(idx),
                            tol.prune_slack * scale_ref, tol)) {
      alive.erase(std::find(alive.begin(), alive.end(), idx));
    }
  }

  Eigen::MatrixXd out(n, alive.size());
  for (std::size_t c = 0; c < alive.size(); ++c) out.col(c) = g.col(alive[c]);
  return ConvexBody(std::move(out));
}

double containment_factor(const ConvexBody& a, const ConvexBody& b,
                          const Tolerances& tol) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("containment_factor: dimension mismatch");
  }
  double factor = 0.0;
  for (int c = 0; c < a.count(); ++c) {
    const double v = gauge(b, a.generators().col(c), tol);
    factor = std::max(factor, v);
    if (std::isinf(factor)) break;
  }
  return factor;
}

}  // namespace dse
