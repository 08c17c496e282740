#pragma once

// Network of coupled discrete-time subsystems
//
//   x_i+ = A_ii x_i + B_i u_i + sum_j A_ij x_j + D_i w_i,   y_i = C_i x_i
//
// with w_i ranging over a bounded disturbance set and an admissible region
// for each estimation error.  The coupling map lists exactly the physical
// in-neighbors: j appears in `coupling` iff A_ij is nonzero.  `delta` flags,
// per in-neighbor, whether the local estimator also consumes that neighbor's
// measurement.

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "dse/convex_body.hpp"
#include "dse/h_polytope.hpp"

namespace dse {

struct Subsystem {
  Eigen::MatrixXd a;  // n x n
  Eigen::MatrixXd b;  // n x m (m may be zero)
  Eigen::MatrixXd c;  // p x n
  Eigen::MatrixXd d;  // n x q
  std::map<int, Eigen::MatrixXd> coupling;  // j -> A_ij, n x n_j, nonzero
  std::map<int, int> delta;                 // j -> 0/1, defaults to 1
  ConvexBody disturbance_set;               // in R^q
  HPolytope error_region;                   // in R^n

  Subsystem() : disturbance_set(ConvexBody::origin(1)), error_region(default_region()) {}

  int states() const { return static_cast<int>(a.rows()); }
  int inputs() const { return static_cast<int>(b.cols()); }
  int outputs() const { return static_cast<int>(c.rows()); }
  int disturbances() const { return static_cast<int>(d.cols()); }

 private:
  static HPolytope default_region() { return HPolytope::axis_box(Eigen::VectorXd::Ones(1)); }
};

struct NetworkModel {
  std::vector<Subsystem> subsystems;

  int size() const { return static_cast<int>(subsystems.size()); }

  // In-neighbors of i in ascending order.
  std::vector<int> neighbors(int i) const;

  // Effective measurement-exchange switch for edge (i, j); 1 unless the model
  // says otherwise.
  int delta(int i, int j) const;

  // Shape and consistency checks; throws ModelError / DimensionMismatch.
  void validate() const;

  // True iff every subsystem reaches every other along coupling edges.
  bool is_strongly_connected() const;
};

}  // namespace dse
