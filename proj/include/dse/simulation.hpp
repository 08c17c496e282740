#pragma once

// Closed-loop simulation of a designed network: the true coupled dynamics,
// the distributed estimators, and the scaling recursion running alongside as
// a monitor.  Each step records whether every estimation error sits inside
// its admissible region and inside its scaled set; the guarantees say both
// flags hold whenever the initial errors respect the initial scalings.
//
// All randomness flows through the project Rng, so traces are reproducible
// bit for bit across platforms, and the CSV writer emits shortest
// round-trip decimals so a written trace parses back to identical doubles.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dse/design.hpp"
#include "dse/network_model.hpp"
#include "dse/rng.hpp"

namespace dse {

enum class DisturbanceMode {
  None,     // w = 0 every step
  Uniform,  // uniform over an axis-box disturbance set (throws NotABox else)
  Extremes  // a uniformly chosen generator of the set
};

const char* to_string(DisturbanceMode mode);

struct SimulationConfig {
  int steps = 20;
  unsigned long long seed = 0;
  DisturbanceMode disturbance = DisturbanceMode::Uniform;
  double init_fraction = 0.5;        // scaling of the inscribed box corner
  std::vector<int> init_generators;  // extreme point per subsystem; empty = 0
  std::vector<Eigen::VectorXd> x0;   // initial true state per subsystem; empty = 0
  std::vector<Eigen::VectorXd> inputs;  // stacked u(t) per step; empty = 0
};

struct SimulationTrace {
  std::vector<Eigen::VectorXd> true_states;  // stacked x(t), t = 0..steps
  std::vector<Eigen::VectorXd> estimates;    // stacked xhat(t)
  std::vector<Eigen::VectorXd> theta;        // scaling vector per step
  std::vector<std::vector<std::uint8_t>> in_region;      // error inside E_i
  std::vector<std::vector<std::uint8_t>> in_scaled_set;  // gauge <= theta_i
  std::vector<double> max_error;  // worst per-subsystem infinity norm
  int violations = 0;             // total count of false flags

  Eigen::VectorXd error(int t) const;  // stacked x - xhat at step t
};

SimulationTrace simulate(const NetworkModel& model, const DesignReport& report,
                         const SimulationConfig& config = {});

// One disturbance draw.  Uniform mode requires the set to be exactly an
// axis-aligned box (all 2^q sign corners present and nothing else).
Eigen::VectorXd sample_disturbance(const ConvexBody& set, DisturbanceMode mode, Rng& rng);

// Worst per-block infinity norm of a stacked vector; `dims` lists the block
// sizes and must tile the vector exactly (HeterogeneousDims otherwise).
double max_error_metric(const Eigen::VectorXd& stacked, const std::vector<int>& dims);

// Shortest decimal string that parses back to exactly the same double.
std::string format_shortest(double v);

// One row per step: states, estimates, scalings, flags, worst error.  The
// exact column layout is documented in docs/formats.md.
std::string trace_to_csv(const NetworkModel& model, const SimulationTrace& trace);

}  // namespace dse
