#include "dse/verify.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "dse/errors.hpp"
#include "dse/h_polytope.hpp"
#include "dse/rng.hpp"

namespace dse {

namespace {

struct Recomputed {
  double lambda;                // worst gauge of the closed self block's image
  double stretch;               // worst region row over the unit set
  double alpha;                 // disturbance factor
  std::map<int, double> mu;     // cross factors per in-neighbor
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

VerifyReport verify_design(const NetworkModel& model, const DesignReport& report,
                           const VerifyConfig& config) {
  if (!report.success()) throw Error("verify_design: design is not in a successful state");
  model.validate();
  const int m = model.size();
  if (static_cast<int>(report.subsystems.size()) != m)
    throw Error("verify_design: report does not match the model");
  if (report.theta.size() != m || report.inner_corner.size() != m)
    throw Error("verify_design: report is missing its scaling data");
  const Tolerances& tol = config.tol;

  // Recompute every factor from the model and the designed gains; the report
  // is only trusted for the recursion it claims (that claim is the thing
  // under test).
  std::vector<Recomputed> facts(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto& sub = model.subsystems[static_cast<std::size_t>(i)];
    const auto& des = report.subsystems[static_cast<std::size_t>(i)];
    const ConvexBody& s_i = des.error_set.set;
    auto& f = facts[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd abar = error_block_self(sub.a, des.gains.self, sub.c);
    f.lambda = containment_factor(linear_image(abar, s_i), s_i, tol);
    f.stretch = h_stretch(s_i, sub.error_region);
    f.alpha = compute_alpha(sub.d, sub.disturbance_set, s_i, tol);
    for (const int j : model.neighbors(i)) {
      const auto& other = model.subsystems[static_cast<std::size_t>(j)];
      const Eigen::MatrixXd cross = error_block_cross(
          sub.coupling.at(j), des.gains.delta.at(j), des.gains.cross.at(j), other.c);
      f.mu[j] = compute_mu(cross, report.subsystems[static_cast<std::size_t>(j)].error_set.set,
                           s_i, tol);
    }
  }

  // Scaling vectors: all corners of the inscribed box, then random draws.
  std::vector<Eigen::VectorXd> thetas;
  if (m <= 16) {
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) theta[i] = report.inner_corner[i];
      thetas.push_back(theta);
    }
  }
  Rng rng(config.seed);
  for (int s = 0; s < config.samples; ++s) {
    Eigen::VectorXd theta(m);
    for (int i = 0; i < m; ++i) theta[i] = rng.uniform(0.0, report.inner_corner[i]);
    thetas.push_back(theta);
  }

  VerifyReport out;
  out.worst_admissibility = std::numeric_limits<double>::infinity();
  out.worst_invariance = std::numeric_limits<double>::infinity();
  out.worst_recursion = std::numeric_limits<double>::infinity();
  for (const auto& theta : thetas) {
    const Eigen::VectorXd next = report.theta.t * theta + report.theta.alpha;
    for (int i = 0; i < m; ++i) {
      const auto& f = facts[static_cast<std::size_t>(i)];
      // (a) theta_i * set inside the region.
      const double adm = 1.0 - theta[i] * f.stretch;
      if (adm < out.worst_admissibility) out.worst_admissibility = adm;
      // (b) worst one-step image gauge against the claimed successor.  The
      // factors are exact worst cases, so this margin certifies the set
      // inclusion itself.
      double reach = f.lambda * theta[i] + f.alpha;
      for (const auto& [j, mu] : f.mu) reach += mu * theta[j];
      const double inv = next[i] - reach;
      if (inv < out.worst_invariance) out.worst_invariance = inv;
    }
    // (c) the successor scalings stay inside the invariant region.
    const Eigen::VectorXd rowvals =
        report.admissible.row_normals * next - report.admissible.row_rhs;
    const double rec = -rowvals.maxCoeff();
    if (rec < out.worst_recursion) out.worst_recursion = rec;
  }
  out.checked = static_cast<int>(thetas.size());

  out.ok = out.worst_admissibility >= -tol.gauge_slack &&
           out.worst_invariance >= -tol.gauge_slack && out.worst_recursion >= -tol.row_slack;
  if (!out.ok) {
    std::ostringstream os;
    os << "verification failed:";
    if (out.worst_admissibility < -tol.gauge_slack)
      os << " scaled set leaves its region (margin " << fmt(out.worst_admissibility) << ")";
    if (out.worst_invariance < -tol.gauge_slack)
      os << " one-step image escapes the successor set (margin " << fmt(out.worst_invariance)
         << ")";
    if (out.worst_recursion < -tol.row_slack)
      os << " successor scalings leave the invariant region (margin " << fmt(out.worst_recursion)
         << ")";
    out.failure = os.str();
  }
  return out;
}

}  // namespace dse
