#include "dse/power_network.hpp"

#include <cmath>

#include "dse/errors.hpp"
#include "dse/numerics.hpp"

namespace dse {

const char* to_string(OutputMode mode) {
  switch (mode) {
    case OutputMode::OmegaOnly:
      return "omega-only";
    case OutputMode::ThetaOmega:
      return "theta-omega";
  }
  return "unknown";
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw NonPositiveParameter(std::string("area parameter ") + name + " must be positive");
}

}  // namespace

ContinuousArea build_continuous(const AreaParams& area) {
  require_positive(area.inertia, "inertia");
  require_positive(area.damping, "damping");
  require_positive(area.turbine_time, "turbine_time");
  require_positive(area.governor_time, "governor_time");
  require_positive(area.droop, "droop");
  double tie_total = 0;
  for (const auto& [j, p] : area.tie_stiffness) {
    require_positive(p, "tie_stiffness");
    tie_total += p;
  }

  const double h2 = 2.0 * area.inertia;
  ContinuousArea out;
  out.a = Eigen::MatrixXd::Zero(4, 4);
  out.a(0, 1) = 1.0;
  out.a(1, 0) = -tie_total / h2;
  out.a(1, 1) = -area.damping / h2;
  out.a(1, 2) = 1.0 / h2;
  out.a(2, 2) = -1.0 / area.turbine_time;
  out.a(2, 3) = 1.0 / area.turbine_time;
  out.a(3, 1) = -1.0 / (area.droop * area.governor_time);
  out.a(3, 3) = -1.0 / area.governor_time;

  out.b = Eigen::MatrixXd::Zero(4, 2);
  out.b(1, 1) = -1.0 / h2;
  out.b(3, 0) = 1.0 / area.governor_time;

  for (const auto& [j, p] : area.tie_stiffness) {
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(4, 4);
    block(1, 0) = p / h2;
    out.coupling[j] = block;
  }
  return out;
}

std::pair<Eigen::MatrixXd, std::vector<Eigen::MatrixXd>> discretize(
    const Eigen::MatrixXd& a, const std::vector<Eigen::MatrixXd>& inputs, double delta) {
  if (a.rows() != a.cols()) throw DimensionMismatch("discretize: drift matrix must be square");
  if (!(delta > 0.0)) throw NonPositiveParameter("discretize: step must be positive");
  const Eigen::Index n = a.rows();
  Eigen::Index p = 0;
  for (const auto& b : inputs) {
    if (b.rows() != n) throw DimensionMismatch("discretize: input matrix row count");
    p += b.cols();
  }

  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + p, n + p);
  aug.topLeftCorner(n, n) = a;
  Eigen::Index at = n;
  for (const auto& b : inputs) {
    aug.block(0, at, n, b.cols()) = b;
    at += b.cols();
  }
  const Eigen::MatrixXd big = matrix_exponential(delta * aug);

  std::pair<Eigen::MatrixXd, std::vector<Eigen::MatrixXd>> out;
  out.first = big.topLeftCorner(n, n);
  at = n;
  for (const auto& b : inputs) {
    out.second.push_back(big.block(0, at, n, b.cols()));
    at += b.cols();
  }
  return out;
}

NetworkModel build_power_network(const PowerScenario& scenario,
                                 std::vector<std::string>* warnings) {
  const int m = static_cast<int>(scenario.areas.size());
  if (m == 0) throw ConfigError("scenario lists no areas");
  if (!(scenario.error_scale > 0.0)) throw ConfigError("error scale must be positive");
  if (scenario.disturbance_bound < 0.0) throw ConfigError("disturbance bound must be >= 0");
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, p] : scenario.areas[static_cast<std::size_t>(i)].tie_stiffness) {
      if (j < 0 || j >= m || j == i)
        throw ConfigError("area " + std::to_string(i) + " lists invalid neighbor " +
                          std::to_string(j));
      const auto& back = scenario.areas[static_cast<std::size_t>(j)].tie_stiffness;
      const auto it = back.find(i);
      const double reverse = it == back.end() ? 0.0 : it->second;
      if (warnings && (j > i || it == back.end()) &&
          std::abs(reverse - p) > 1e-12 * (1.0 + std::abs(p)))
        warnings->push_back("tie-line stiffness between " + std::to_string(i) + " and " +
                            std::to_string(j) + " is asymmetric");
    }
  }

  Eigen::VectorXd bounds(4);
  bounds << 0.005, 0.01, 0.01, 0.01;
  bounds *= scenario.error_scale;

  NetworkModel model;
  for (int i = 0; i < m; ++i) {
    const ContinuousArea cont = build_continuous(scenario.areas[static_cast<std::size_t>(i)]);
    std::vector<Eigen::MatrixXd> held;
    held.push_back(cont.b);
    std::vector<int> neighbor_order;
    for (const auto& [j, block] : cont.coupling) {
      held.push_back(block);
      neighbor_order.push_back(j);
    }
    held.push_back(Eigen::MatrixXd::Identity(4, 4));  // disturbance channel
    const auto [ad, discrete] = discretize(cont.a, held, scenario.sample_time);

    Subsystem sub;
    sub.a = ad;
    sub.b = discrete.front();
    sub.d = discrete.back();
    for (std::size_t k = 0; k < neighbor_order.size(); ++k)
      sub.coupling[neighbor_order[k]] = discrete[k + 1];
    if (scenario.outputs == OutputMode::OmegaOnly) {
      sub.c = Eigen::MatrixXd::Zero(1, 4);
      sub.c(0, 1) = 1.0;
    } else {
      sub.c = Eigen::MatrixXd::Zero(2, 4);
      sub.c(0, 0) = 1.0;
      sub.c(1, 1) = 1.0;
    }
    sub.disturbance_set = scenario.disturbance_bound > 0.0
                              ? ConvexBody::axis_box(
                                    Eigen::VectorXd::Constant(4, scenario.disturbance_bound))
                              : ConvexBody::origin(4);
    sub.error_region = HPolytope::axis_box(bounds);
    model.subsystems.push_back(std::move(sub));
  }
  model.validate();
  return model;
}

PowerScenario builtin_scenario(const std::string& name) {
  // Four areas in a ring.  The constants are plausible per-unit values for
  // mid-size areas; they are illustrative defaults, not measured data.
  PowerScenario s;
  s.areas.resize(4);
  auto& a0 = s.areas[0];
  a0.inertia = 12.0;
  a0.damping = 0.7;
  a0.turbine_time = 0.65;
  a0.governor_time = 0.35;
  a0.droop = 0.05;
  auto& a1 = s.areas[1];
  a1.inertia = 10.0;
  a1.damping = 0.9;
  a1.turbine_time = 0.4;
  a1.governor_time = 0.3;
  a1.droop = 0.0625;
  auto& a2 = s.areas[2];
  a2.inertia = 8.0;
  a2.damping = 0.9;
  a2.turbine_time = 0.3;
  a2.governor_time = 0.32;
  a2.droop = 0.08;
  auto& a3 = s.areas[3];
  a3.inertia = 8.0;
  a3.damping = 0.7;
  a3.turbine_time = 0.6;
  a3.governor_time = 0.38;
  a3.droop = 0.08;
  const auto tie = [&](int i, int j, double p) {
    s.areas[static_cast<std::size_t>(i)].tie_stiffness[j] = p;
    s.areas[static_cast<std::size_t>(j)].tie_stiffness[i] = p;
  };
  tie(0, 1, 4.0);
  tie(1, 2, 2.0);
  tie(2, 3, 2.0);
  tie(3, 0, 3.0);

  if (name == "example1") {
    s.outputs = OutputMode::OmegaOnly;
    s.error_scale = 1.0;
    s.disturbance_bound = 0.0;
  } else if (name == "example2") {
    s.outputs = OutputMode::ThetaOmega;
    s.error_scale = 1.0;
    s.disturbance_bound = 0.0;
  } else if (name == "example3") {
    s.outputs = OutputMode::ThetaOmega;
    s.error_scale = 2.0;
    s.disturbance_bound = 1e-5;
  } else {
    throw ConfigError("unknown builtin scenario '" + name + "'");
  }
  return s;
}

}  // namespace dse
