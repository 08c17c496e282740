#pragma once

// lambda-contractive set synthesis from forward images of a seed set.
//
// Given closed-loop error dynamics e+ = Abar e, a seed C-set S0 and a horizon
// k, the images S^s = Abar^s S0 are accumulated into D = S^0 + ... + S^(k-1)
// (Minkowski sum).  With
//    gamma = min { g : S^k in g S0 }          (must be < 1)
//    delta = max(1, min { d : D in d S0 })
//    beta  = worst stretch of D against the error region E
// the normalized set S = D / beta satisfies S in E (touching the boundary)
// and Abar S in lambda S with lambda = (delta + gamma - 1) / delta < 1.

#include <Eigen/Dense>

#include "dse/convex_body.hpp"
#include "dse/h_polytope.hpp"
#include "dse/tolerances.hpp"

namespace dse {

struct ContractiveSet {
  ConvexBody set;     // pruned generator list, scaled to touch E
  double lambda = 0;  // contraction factor of Abar on the set
  double gamma = 0;   // containment factor of the k-th image in the seed
  double delta = 1;   // containment factor of the accumulated sum in the seed
  double beta = 1;    // normalization that makes the set touch E
  int k = 1;          // horizon used

  ContractiveSet() : set(ConvexBody::origin(1)) {}
};

// Throws NotContractive (with the achieved gamma) when the k-th image does
// not contract into the seed.  The result always touches the region: the
// worst stretch of `set` against E is exactly 1.
ContractiveSet synthesize_contractive_set(
    const Eigen::MatrixXd& abar, const HPolytope& region, const ConvexBody& seed,
    int k, const Tolerances& tol = default_tolerances());

// Smallest s <= n with Abar^s numerically zero, or -1 if none: the natural
// horizon for deadbeat closed loops.
int nilpotency_index(const Eigen::MatrixXd& abar);

}  // namespace dse
