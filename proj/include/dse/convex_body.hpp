#pragma once

// Compact convex sets represented by a finite generator list: the set is the
// convex hull of the columns of `generators`.  All set algebra (gauge,
// support, images, Minkowski sums, containment factors) works directly on the
// generator matrix through small LPs; no facet enumeration ever happens.
//
// A body is a C-set when the origin lies in its hull.  Gauges are defined for
// C-sets only; points outside the reachable cone of a degenerate body get a
// gauge of +infinity.

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "dse/tolerances.hpp"

namespace dse {

class ConvexBody {
 public:
  // One generator per column; at least one column, all entries finite.
  explicit ConvexBody(Eigen::MatrixXd generators);

  // Hypercube [-radii, radii] as the 2^n corner generators.
  static ConvexBody axis_box(const Eigen::VectorXd& radii);
  // The singleton {0} in dimension n.
  static ConvexBody origin(int dim);

  int dim() const { return static_cast<int>(gens_.rows()); }
  int count() const { return static_cast<int>(gens_.cols()); }
  const Eigen::MatrixXd& generators() const { return gens_; }
  Eigen::VectorXd generator(int k) const { return gens_.col(k); }

  bool is_singleton_origin(double eps = 1e-15) const;

 private:
  Eigen::MatrixXd gens_;
};

// min { sum c : generators * c = x, c >= 0 }; equals min { t >= 0 : x in t*body }
// for C-sets.  Returns +infinity when x is outside the cone of a degenerate
// body; throws NotACSet when the origin is not in the hull.
double gauge(const ConvexBody& body, const Eigen::VectorXd& x,
             const Tolerances& tol = default_tolerances());

// max over the body of direction . x (no C-set requirement).
double support(const ConvexBody& body, const Eigen::VectorXd& direction);

// Feasibility LP over convex weights; true iff 0 is in the hull.
bool origin_in_hull(const ConvexBody& body,
                    const Tolerances& tol = default_tolerances());

// { M x : x in body }.
ConvexBody linear_image(const Eigen::MatrixXd& m, const ConvexBody& body);

// Pairwise generator sums; prunes automatically when the raw product exceeds
// tol.minkowski_prune_threshold.
ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b,
                         const Tolerances& tol = default_tolerances());

// t * body for t >= 0.  Throws NegativeScale otherwise.
ConvexBody scale(const ConvexBody& body, double t);

// Drops generators that lie inside the hull of the others (within
// tol.prune_slack); of exact duplicates one copy survives.  Gauge values of
// the hull are preserved to within the slack.
ConvexBody prune_generators(const ConvexBody& body,
                            const Tolerances& tol = default_tolerances());

// min { t >= 0 : a subset of t * b } = max over generators of a of gauge(b, .).
// +infinity when some generator is unreachable.
double containment_factor(const ConvexBody& a, const ConvexBody& b,
                          const Tolerances& tol = default_tolerances());

}  // namespace dse
