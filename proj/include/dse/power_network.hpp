#pragma once

// Benchmark builder: a network of interconnected power-generation areas under
// primary frequency control, linearized around an operating point.  Each area
// carries four states (angle, frequency, mechanical power, valve position),
// two held inputs (governor reference and local load), and couples to its
// neighbors through tie-line stiffness.  Areas are discretized exactly with a
// zero-order hold on every exogenous signal, which keeps the neighbor
// topology unchanged.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dse/network_model.hpp"

namespace dse {

struct AreaParams {
  double inertia = 10.0;        // H, seconds of stored energy at rated power
  double damping = 0.8;         // load-frequency damping in the drift matrix
  double turbine_time = 0.5;    // T_t
  double governor_time = 0.1;   // T_g
  double droop = 0.05;          // R, speed-droop of the primary control
  std::map<int, double> tie_stiffness;  // P_ij per neighboring area
};

enum class OutputMode {
  OmegaOnly,  // measure frequency deviation only
  ThetaOmega  // measure angle and frequency deviation
};

const char* to_string(OutputMode mode);

struct PowerScenario {
  std::vector<AreaParams> areas;
  OutputMode outputs = OutputMode::ThetaOmega;
  double error_scale = 1.0;       // multiplies the per-axis error bounds
  double disturbance_bound = 0;   // infinity-norm radius of W; 0 = no noise
  double sample_time = 1.0;       // seconds
};

// Continuous-time matrices of one area: drift, input map (reference, load),
// and one coupling block per neighbor.
struct ContinuousArea {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  std::map<int, Eigen::MatrixXd> coupling;
};

ContinuousArea build_continuous(const AreaParams& area);

// Exact zero-order-hold discretization of xdot = A x + sum_k B_k u_k with
// each u_k held over the step: returns e^{A delta} and the integrated input
// matrices, via one augmented matrix exponential.
std::pair<Eigen::MatrixXd, std::vector<Eigen::MatrixXd>> discretize(
    const Eigen::MatrixXd& a, const std::vector<Eigen::MatrixXd>& inputs, double delta);

// Assemble the discretized network for a scenario.  Per-axis error bounds are
// error_scale * (0.005 on the angle, 0.01 elsewhere).  Asymmetric tie-line
// stiffness is legal but reported through `warnings` when given.
NetworkModel build_power_network(const PowerScenario& scenario,
                                 std::vector<std::string>* warnings = nullptr);

// Shipped four-area ring configurations: "example1" measures frequency only
// and no disturbance, "example2" measures angle and frequency and no
// disturbance, "example3" adds a 1e-5 disturbance box and doubles the error
// bounds.  Parameter values are plausible area constants, not normative data.
PowerScenario builtin_scenario(const std::string& name);

}  // namespace dse
