#pragma once

// End-to-end estimator design for a subsystem network.
//
// The procedure runs in three parts:
//   A. per subsystem: deadbeat local gain, contractive error set, admissible
//      cap and disturbance factor;
//   B. per coupling edge: cross gain and its containment factor;
//   C. network-wide: the scaling-factor recursion, its Schur and equilibrium
//      checks, the invariant scaling region and the inscribed box.
// Design-level failures (loss of observability, no contraction, unstable
// scaling recursion, equilibrium outside the caps) are reported as statuses,
// not exceptions, so callers can react to each stop; exceptions remain for
// malformed inputs.
//
// plug_in / unplug update an existing design when one subsystem joins or
// leaves, touching only the designs of the newcomer and its direct children
// (plug-in) or nobody (unplug, which slices the invariant region instead of
// recomputing it unless a refresh is requested).

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dse/contractive_set.hpp"
#include "dse/network_model.hpp"
#include "dse/observer_design.hpp"
#include "dse/theta_invariance.hpp"
#include "dse/theta_system.hpp"
#include "dse/tolerances.hpp"

namespace dse {

enum class DesignStatus {
  Success,
  StoppedNotObservable,
  StoppedNotContractive,
  StoppedNotSchur,
  StoppedEquilibriumOutside,
};

const char* to_string(DesignStatus status);

struct SubsystemDesign {
  EstimatorGains gains;
  ContractiveSet error_set;
  double theta_tilde = 1.0;    // largest admissible scaling of the set
  double alpha = 0.0;          // disturbance containment factor
  std::map<int, double> mu;    // per in-neighbor cross containment factor
};

struct DesignConfig {
  CouplingMode coupling_mode = CouplingMode::Frobenius;
  int horizon = 0;       // contraction horizon; 0 = automatic per subsystem
  int horizon_cap = 12;  // upper limit when the automatic probe has to grow
  bool revise_exchange = true;  // drop exchanges whose designed gain is zero
  std::vector<ConvexBody> seeds;  // optional per-subsystem seed sets; empty =
                                  // derive a box from each error region
  Tolerances tol = default_tolerances();
};

struct DesignReport {
  DesignStatus status = DesignStatus::Success;
  int stopped_at = -1;  // subsystem at fault for per-subsystem stops
  std::vector<SubsystemDesign> subsystems;
  ThetaSystem theta;             // populated once part C starts
  ThetaInvariantSet admissible;  // populated on success
  Eigen::VectorXd inner_corner;  // ditto
  std::vector<std::string> log;  // per-step provenance, human readable

  bool success() const { return status == DesignStatus::Success; }
};

DesignReport design(const NetworkModel& model, const DesignConfig& config = {});

// A subsystem joining an already designed network: its own model data plus
// the new coupling blocks A_{q,new} of every existing child q that will feel
// it (with optional exchange switches).
struct PlugInRequest {
  Subsystem subsystem;
  std::map<int, Eigen::MatrixXd> child_couplings;
  std::map<int, int> child_deltas;
};

struct PlugInOutcome {
  bool accepted = false;
  DesignStatus status = DesignStatus::Success;  // the reason when rejected
  NetworkModel model;   // grown when accepted, otherwise the original
  DesignReport report;  // ditto
};

// Designs the newcomer and the affected child edges, then re-checks the
// network-wide conditions.  The original design is returned untouched when
// any step stops.
PlugInOutcome plug_in(const NetworkModel& model, const DesignReport& report,
                      const PlugInRequest& request, const DesignConfig& config = {});

struct UnplugOutcome {
  NetworkModel model;
  DesignReport report;
  bool invariance_ok = false;      // sliced region maps into itself
  bool admissibility_ok = false;   // sliced region stays under the caps
  bool equilibrium_ok = false;     // reduced equilibrium inside the region
  bool strongly_connected = true;  // connectivity warning for what remains
};

// Removes one subsystem.  The remaining designs are kept as they are; the
// invariant scaling region is sliced at theta_leaving = 0 (or rebuilt from
// scratch when refresh is set) and the three region properties are
// re-verified by LP.
UnplugOutcome unplug(const NetworkModel& model, const DesignReport& report, int leaving,
                     bool refresh = false, const DesignConfig& config = {});

// Initialization data every subsystem can compute alone: scale the inscribed
// box corner by `fraction` and place each initial error on a chosen extreme
// point of its scaled set.
struct DecentralizedInit {
  Eigen::VectorXd theta0;
  std::vector<Eigen::VectorXd> error0;
};

DecentralizedInit decentralized_init(const DesignReport& report, double fraction,
                                     const std::vector<int>& generator_choice = {});

}  // namespace dse
