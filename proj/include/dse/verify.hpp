#pragma once

// Independent a-posteriori check of a finished design.
//
// Every containment factor is recomputed from the model and the designed
// gains and sets (fresh LPs, nothing taken from the report), and the three
// family conditions are then evaluated over sampled scaling vectors from the
// inscribed box plus all of its corners:
//   (a) each scaled error set stays inside its admissible region,
//   (b) one step of the coupled error dynamics lands inside the successor
//       scaled sets: the recomputed worst-case factors against the reported
//       recursion theta+ = T theta + alpha,
//   (c) the successor scalings satisfy every row of the invariant region.
// Reported margins are signed: the smallest value observed, negative meaning
// a violation.

#include <string>

#include <Eigen/Dense>

#include "dse/design.hpp"
#include "dse/network_model.hpp"
#include "dse/tolerances.hpp"

namespace dse {

struct VerifyConfig {
  int samples = 200;               // random draws from the inscribed box
  unsigned long long seed = 1;     // draws are reproducible
  Tolerances tol = default_tolerances();
};

struct VerifyReport {
  bool ok = false;
  int checked = 0;                 // scaling vectors evaluated
  double worst_admissibility = 0;  // condition (a), min over samples
  double worst_invariance = 0;     // condition (b)
  double worst_recursion = 0;      // condition (c)
  std::string failure;             // empty when ok
};

VerifyReport verify_design(const NetworkModel& model, const DesignReport& report,
                           const VerifyConfig& config = {});

}  // namespace dse
