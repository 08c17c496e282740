#include "dse/h_polytope.hpp"

#include <cmath>

#include "dse/errors.hpp"

namespace dse {

HPolytope::HPolytope(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw DimensionMismatch("HPolytope: need at least one row");
  }
  if (!rows_.allFinite()) throw NonFinite("HPolytope: non-finite row");
}

HPolytope HPolytope::axis_box(const Eigen::VectorXd& radii) {
  const int n = static_cast<int>(radii.size());
  if (n < 1) throw DimensionMismatch("HPolytope::axis_box: empty radii");
  if ((radii.array() <= 0.0).any()) {
    throw NegativeScale("HPolytope::axis_box: radii must be positive");
  }
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(2 * n, n);
  for (int j = 0; j < n; ++j) {
    rows(2 * j, j) = 1.0 / radii[j];
    rows(2 * j + 1, j) = -1.0 / radii[j];
  }
  return HPolytope(rows);
}

HPolytope HPolytope::scaled(double t) const {
  if (!(t > 0.0)) throw NegativeScale("HPolytope::scaled: factor must be positive");
  return HPolytope(rows_ / t);
}

std::optional<Eigen::VectorXd> HPolytope::as_box_radii(double eps) const {
  const int n = dim();
  Eigen::VectorXd pos = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd neg = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < count(); ++i) {
    int axis = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(rows_(i, j)) > eps) {
        if (axis >= 0) return std::nullopt;  // more than one nonzero
        axis = j;
      }
    }
    if (axis < 0) return std::nullopt;  // all-zero row
    const double c = rows_(i, axis);
    double& slot = c > 0.0 ? pos[axis] : neg[axis];
    if (slot != 0.0 && std::abs(slot - std::abs(c)) > eps * std::abs(c)) {
      return std::nullopt;  // conflicting duplicate
    }
    slot = std::abs(c);
  }
  Eigen::VectorXd radii(n);
  for (int j = 0; j < n; ++j) {
    if (pos[j] <= 0.0 || neg[j] <= 0.0) return std::nullopt;  // unbounded axis
    if (std::abs(pos[j] - neg[j]) > eps * pos[j]) return std::nullopt;
    radii[j] = 1.0 / pos[j];
  }
  return radii;
}

bool contained_in_h(const ConvexBody& body, const HPolytope& region,
                    const Tolerances& tol) {
  return h_stretch(body, region) <= 1.0 + tol.containment_slack;
}

double h_stretch(const ConvexBody& body, const HPolytope& region) {
  if (body.dim() != region.dim()) {
    throw DimensionMismatch("h_stretch: dimension mismatch");
  }
  return (region.rows() * body.generators()).maxCoeff();
}

}  // namespace dse
