#include "dse/simulation.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "dse/convex_body.hpp"
#include "dse/errors.hpp"

namespace dse {

const char* to_string(DisturbanceMode mode) {
  switch (mode) {
    case DisturbanceMode::None:
      return "none";
    case DisturbanceMode::Uniform:
      return "uniform";
    case DisturbanceMode::Extremes:
      return "extremes";
  }
  return "unknown";
}

Eigen::VectorXd SimulationTrace::error(int t) const {
  return true_states[static_cast<std::size_t>(t)] - estimates[static_cast<std::size_t>(t)];
}

namespace {

// Radii of an exact axis box: every generator is a full sign corner and all
// 2^q corners appear.
Eigen::VectorXd box_radii_or_throw(const ConvexBody& set) {
  const int q = set.dim();
  const Eigen::MatrixXd& g = set.generators();
  const Eigen::VectorXd radii = g.cwiseAbs().rowwise().maxCoeff();
  if (q > 20) throw NotABox("sample_disturbance: dimension too large for a corner check");
  const double slack = 1e-12 * (1.0 + radii.maxCoeff());
  std::vector<bool> corner_seen(static_cast<std::size_t>(1) << q, false);
  for (int k = 0; k < set.count(); ++k) {
    std::size_t mask = 0;
    for (int j = 0; j < q; ++j) {
      if (std::abs(std::abs(g(j, k)) - radii[j]) > slack)
        throw NotABox("sample_disturbance: generator " + std::to_string(k) +
                      " is not a corner of the bounding box");
      if (g(j, k) > 0) mask |= (static_cast<std::size_t>(1) << j);
    }
    corner_seen[mask] = true;
  }
  for (std::size_t mask = 0; mask < corner_seen.size(); ++mask) {
    bool degenerate = false;  // axes with zero radius collapse corner pairs
    for (int j = 0; j < q; ++j)
      if (radii[j] <= slack && (mask & (static_cast<std::size_t>(1) << j))) degenerate = true;
    if (!degenerate && !corner_seen[mask])
      throw NotABox("sample_disturbance: bounding-box corner missing from the generators");
  }
  return radii;
}

}  // namespace

Eigen::VectorXd sample_disturbance(const ConvexBody& set, DisturbanceMode mode, Rng& rng) {
  switch (mode) {
    case DisturbanceMode::None:
      return Eigen::VectorXd::Zero(set.dim());
    case DisturbanceMode::Extremes:
      return set.generator(rng.uniform_int(0, set.count() - 1));
    case DisturbanceMode::Uniform: {
      if (set.is_singleton_origin()) return Eigen::VectorXd::Zero(set.dim());
      const Eigen::VectorXd radii = box_radii_or_throw(set);
      Eigen::VectorXd w(set.dim());
      for (int j = 0; j < set.dim(); ++j) w[j] = rng.uniform(-radii[j], radii[j]);
      return w;
    }
  }
  throw Error("sample_disturbance: unknown mode");
}

double max_error_metric(const Eigen::VectorXd& stacked, const std::vector<int>& dims) {
  int total = 0;
  for (const int d : dims) {
    if (d <= 0) throw HeterogeneousDims("max_error_metric: block sizes must be positive");
    total += d;
  }
  if (dims.empty() || total != stacked.size())
    throw HeterogeneousDims("max_error_metric: block sizes do not tile the vector (" +
                            std::to_string(total) + " vs " + std::to_string(stacked.size()) + ")");
  double worst = 0;
  int at = 0;
  for (const int d : dims) {
    worst = std::max(worst, stacked.segment(at, d).lpNorm<Eigen::Infinity>());
    at += d;
  }
  return worst;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

SimulationTrace simulate(const NetworkModel& model, const DesignReport& report,
                         const SimulationConfig& config) {
  if (!report.success()) throw Error("simulate: design is not in a successful state");
  model.validate();
  const int m = model.size();
  if (static_cast<int>(report.subsystems.size()) != m)
    throw Error("simulate: report does not match the model");
  if (config.steps < 0) throw Error("simulate: negative step count");

  std::vector<int> dims(static_cast<std::size_t>(m)), input_dims(static_cast<std::size_t>(m));
  std::vector<int> offset(static_cast<std::size_t>(m)), input_offset(static_cast<std::size_t>(m));
  int total = 0, total_inputs = 0;
  for (int i = 0; i < m; ++i) {
    dims[static_cast<std::size_t>(i)] = model.subsystems[static_cast<std::size_t>(i)].states();
    offset[static_cast<std::size_t>(i)] = total;
    total += dims[static_cast<std::size_t>(i)];
    input_dims[static_cast<std::size_t>(i)] = model.subsystems[static_cast<std::size_t>(i)].inputs();
    input_offset[static_cast<std::size_t>(i)] = total_inputs;
    total_inputs += input_dims[static_cast<std::size_t>(i)];
  }
  if (!config.x0.empty() && static_cast<int>(config.x0.size()) != m)
    throw Error("simulate: initial state list length does not match the network");
  if (!config.inputs.empty() && static_cast<int>(config.inputs.size()) < config.steps)
    throw Error("simulate: input schedule shorter than the horizon");

  const DecentralizedInit init =
      decentralized_init(report, config.init_fraction, config.init_generators);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(total);
  for (int i = 0; i < m && !config.x0.empty(); ++i) {
    const auto& xi = config.x0[static_cast<std::size_t>(i)];
    if (xi.size() != dims[static_cast<std::size_t>(i)])
      throw DimensionMismatch("simulate: initial state of subsystem " + std::to_string(i));
    x.segment(offset[static_cast<std::size_t>(i)], dims[static_cast<std::size_t>(i)]) = xi;
  }
  Eigen::VectorXd xhat = x;
  for (int i = 0; i < m; ++i)
    xhat.segment(offset[static_cast<std::size_t>(i)], dims[static_cast<std::size_t>(i)]) -=
        init.error0[static_cast<std::size_t>(i)];
  Eigen::VectorXd theta = init.theta0;

  Rng rng(config.seed);
  SimulationTrace trace;
  trace.true_states.reserve(static_cast<std::size_t>(config.steps) + 1);

  const auto record = [&](const Eigen::VectorXd& xs, const Eigen::VectorXd& xh,
                          const Eigen::VectorXd& th) {
    trace.true_states.push_back(xs);
    trace.estimates.push_back(xh);
    trace.theta.push_back(th);
    std::vector<std::uint8_t> reg(static_cast<std::size_t>(m)), inset(static_cast<std::size_t>(m));
    const Eigen::VectorXd err = xs - xh;
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd e = err.segment(offset[static_cast<std::size_t>(i)],
                                            dims[static_cast<std::size_t>(i)]);
      const auto& sub = model.subsystems[static_cast<std::size_t>(i)];
      const bool in_e = (sub.error_region.rows() * e).maxCoeff() <= 1.0 + 1e-9;
      const double g = gauge(report.subsystems[static_cast<std::size_t>(i)].error_set.set, e);
      const bool in_s = g <= th[i] + 1e-7;
      reg[static_cast<std::size_t>(i)] = in_e ? 1 : 0;
      inset[static_cast<std::size_t>(i)] = in_s ? 1 : 0;
      if (!in_e) ++trace.violations;
      if (!in_s) ++trace.violations;
    }
    trace.in_region.push_back(std::move(reg));
    trace.in_scaled_set.push_back(std::move(inset));
    trace.max_error.push_back(max_error_metric(err, dims));
  };

  record(x, xhat, theta);
  for (int t = 0; t < config.steps; ++t) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(total_inputs);
    if (!config.inputs.empty()) {
      if (config.inputs[static_cast<std::size_t>(t)].size() != total_inputs)
        throw DimensionMismatch("simulate: stacked input at step " + std::to_string(t));
      u = config.inputs[static_cast<std::size_t>(t)];
    }

    Eigen::VectorXd xn = Eigen::VectorXd::Zero(total);
    Eigen::VectorXd xhn = Eigen::VectorXd::Zero(total);
    for (int i = 0; i < m; ++i) {
      const auto& sub = model.subsystems[static_cast<std::size_t>(i)];
      const auto& des = report.subsystems[static_cast<std::size_t>(i)];
      const auto seg = [&](const Eigen::VectorXd& v, int j) {
        return v.segment(offset[static_cast<std::size_t>(j)], dims[static_cast<std::size_t>(j)]);
      };
      const Eigen::VectorXd w =
          sample_disturbance(sub.disturbance_set, config.disturbance, rng);
      const Eigen::VectorXd ui =
          u.segment(input_offset[static_cast<std::size_t>(i)],
                    input_dims[static_cast<std::size_t>(i)]);

      Eigen::VectorXd next = sub.a * seg(x, i) + sub.b * ui + sub.d * w;
      // Estimator: model copy plus output injection, local and exchanged.
      Eigen::VectorXd next_hat = sub.a * seg(xhat, i) + sub.b * ui +
                                 des.gains.self * (sub.c * seg(xhat, i) - sub.c * seg(x, i));
      for (const auto& [j, block] : sub.coupling) {
        next += block * seg(x, j);
        next_hat += block * seg(xhat, j);
        if (des.gains.delta.at(j) == 1) {
          const auto& cj = model.subsystems[static_cast<std::size_t>(j)].c;
          next_hat += des.gains.cross.at(j) * (cj * seg(xhat, j) - cj * seg(x, j));
        }
      }
      xn.segment(offset[static_cast<std::size_t>(i)], dims[static_cast<std::size_t>(i)]) = next;
      xhn.segment(offset[static_cast<std::size_t>(i)], dims[static_cast<std::size_t>(i)]) =
          next_hat;
    }
    x = xn;
    xhat = xhn;
    theta = (report.theta.t * theta + report.theta.alpha).eval();
    record(x, xhat, theta);
  }
  return trace;
}

std::string trace_to_csv(const NetworkModel& model, const SimulationTrace& trace) {
  const int m = model.size();
  std::ostringstream os;
  os << "step";
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < model.subsystems[static_cast<std::size_t>(i)].states(); ++k)
      os << ",x" << i << "_" << k;
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < model.subsystems[static_cast<std::size_t>(i)].states(); ++k)
      os << ",xhat" << i << "_" << k;
  for (int i = 0; i < m; ++i) os << ",theta" << i;
  for (int i = 0; i < m; ++i) os << ",in_region" << i;
  for (int i = 0; i < m; ++i) os << ",in_set" << i;
  os << ",max_error\n";

  for (std::size_t t = 0; t < trace.true_states.size(); ++t) {
    os << t;
    for (Eigen::Index k = 0; k < trace.true_states[t].size(); ++k)
      os << "," << format_shortest(trace.true_states[t][k]);
    for (Eigen::Index k = 0; k < trace.estimates[t].size(); ++k)
      os << "," << format_shortest(trace.estimates[t][k]);
    for (Eigen::Index k = 0; k < trace.theta[t].size(); ++k)
      os << "," << format_shortest(trace.theta[t][k]);
    for (int i = 0; i < m; ++i) os << "," << int(trace.in_region[t][static_cast<std::size_t>(i)]);
    for (int i = 0; i < m; ++i)
      os << "," << int(trace.in_scaled_set[t][static_cast<std::size_t>(i)]);
    os << "," << format_shortest(trace.max_error[t]) << "\n";
  }
  return os.str();
}

}  // namespace dse
