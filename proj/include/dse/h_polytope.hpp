#pragma once

// Polytopes in the normalized halfspace form { x : row . x <= 1 for all rows }.
// Used for the admissible error regions; always contains the origin.

#include <optional>

#include <Eigen/Dense>

#include "dse/convex_body.hpp"
#include "dse/tolerances.hpp"

namespace dse {

class HPolytope {
 public:
  // One constraint per row of `rows`: rows(i,:) . x <= 1.
  explicit HPolytope(Eigen::MatrixXd rows);

  // [-radii, radii] as 2n rows; radii must be strictly positive.
  static HPolytope axis_box(const Eigen::VectorXd& radii);

  int dim() const { return static_cast<int>(rows_.cols()); }
  int count() const { return static_cast<int>(rows_.rows()); }
  const Eigen::MatrixXd& rows() const { return rows_; }

  // Scales the set by t > 0 (divides all rows by t).
  HPolytope scaled(double t) const;

  // If the rows describe exactly an axis-aligned box, its radii.
  std::optional<Eigen::VectorXd> as_box_radii(double eps = 1e-12) const;

 private:
  Eigen::MatrixXd rows_;
};

// True iff every generator satisfies every row within tol.containment_slack.
bool contained_in_h(const ConvexBody& body, const HPolytope& region,
                    const Tolerances& tol = default_tolerances());

// Worst-case row value max_g max_i row_i . g (1 means touching the boundary).
double h_stretch(const ConvexBody& body, const HPolytope& region);

}  // namespace dse
