#include "dse/design.hpp"

#include <sstream>
#include <utility>

#include "dse/errors.hpp"
#include "dse/numerics.hpp"

namespace dse {

const char* to_string(DesignStatus status) {
  switch (status) {
    case DesignStatus::Success:
      return "success";
    case DesignStatus::StoppedNotObservable:
      return "stopped-not-observable";
    case DesignStatus::StoppedNotContractive:
      return "stopped-not-contractive";
    case DesignStatus::StoppedNotSchur:
      return "stopped-not-schur";
    case DesignStatus::StoppedEquilibriumOutside:
      return "stopped-equilibrium-outside";
  }
  return "unknown";
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

ConvexBody seed_for(const Subsystem& sub, const DesignConfig& config, int i) {
  if (!config.seeds.empty()) return config.seeds[static_cast<std::size_t>(i)];
  if (const auto radii = sub.error_region.as_box_radii()) return ConvexBody::axis_box(*radii);
  return ConvexBody::axis_box(Eigen::VectorXd::Ones(sub.states()));
}

// Part A for one subsystem: local gain, contractive set, cap and disturbance
// factor.  Returns false with `why` set when the procedure stops here.
bool design_local(const Subsystem& sub, int i, const DesignConfig& config, SubsystemDesign& out,
                  DesignStatus& why, std::vector<std::string>& log) {
  const Tolerances& tol = config.tol;
  const int n = sub.states();
  const std::string tag = "subsystem " + std::to_string(i);

  const int rank = observability_rank(sub.a, sub.c, tol);
  if (rank < n) {
    log.push_back(tag + ": stop, observability rank " + std::to_string(rank) + " of " +
                  std::to_string(n));
    why = DesignStatus::StoppedNotObservable;
    return false;
  }
  try {
    out.gains.self = design_deadbeat_gain(sub.a, sub.c, tol);
  } catch (const NotObservable& e) {
    log.push_back(tag + ": stop, local gain synthesis failed (" + std::string(e.what()) + ")");
    why = DesignStatus::StoppedNotObservable;
    return false;
  }
  const Eigen::MatrixXd abar = error_block_self(sub.a, out.gains.self, sub.c);
  const ConvexBody seed = seed_for(sub, config, i);

  std::vector<int> horizons;
  if (config.horizon > 0) {
    horizons.push_back(config.horizon);
  } else {
    int k0 = nilpotency_index(abar);
    if (k0 < 1) k0 = 1;
    for (int k = k0; k <= std::max(k0, config.horizon_cap); ++k) horizons.push_back(k);
  }
  bool built = false;
  double last_gamma = 0;
  for (const int k : horizons) {
    try {
      out.error_set = synthesize_contractive_set(abar, sub.error_region, seed, k, tol);
      built = true;
      break;
    } catch (const NotContractive& e) {
      last_gamma = e.gamma_star;
    }
  }
  if (!built) {
    log.push_back(tag + ": stop, no contraction up to horizon " +
                  std::to_string(horizons.back()) + " (last factor " + fmt(last_gamma) + ")");
    why = DesignStatus::StoppedNotContractive;
    return false;
  }
  out.theta_tilde = compute_theta_tilde(out.error_set.set, sub.error_region);
  out.alpha = compute_alpha(sub.d, sub.disturbance_set, out.error_set.set, tol);
  log.push_back(tag + ": deadbeat gain, horizon " + std::to_string(out.error_set.k) +
                ", lambda " + fmt(out.error_set.lambda) + ", cap " + fmt(out.theta_tilde) +
                ", disturbance factor " + fmt(out.alpha));
  return true;
}

// Part B for the edge (i <- j): cross gain, possible exchange revision, and
// the containment factor.
void design_edge(const NetworkModel& model, int i, int j, const ConvexBody& s_i,
                 const ConvexBody& s_j, const DesignConfig& config, SubsystemDesign& di,
                 std::vector<std::string>& log) {
  const auto& sub = model.subsystems[static_cast<std::size_t>(i)];
  const auto& other = model.subsystems[static_cast<std::size_t>(j)];
  const Eigen::MatrixXd& a_ij = sub.coupling.at(j);
  int delta = model.delta(i, j);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(sub.states(), other.outputs());
  if (delta == 1) {
    l = design_coupling_gain(a_ij, other.c, config.coupling_mode, &s_j, &s_i, config.tol);
    if (config.revise_exchange && suggest_delta_revision(l, delta, config.tol) == 0) {
      delta = 0;
      l.setZero();
      log.push_back("edge " + std::to_string(i) + " <- " + std::to_string(j) +
                    ": exchange dropped, designed gain is zero");
    }
  }
  di.gains.cross[j] = l;
  di.gains.delta[j] = delta;
  const Eigen::MatrixXd abar = error_block_cross(a_ij, delta, l, other.c);
  di.mu[j] = compute_mu(abar, s_j, s_i, config.tol);
  log.push_back("edge " + std::to_string(i) + " <- " + std::to_string(j) + ": " +
                to_string(config.coupling_mode) + (delta == 1 ? " gain" : " gain unused") +
                ", factor " + fmt(di.mu[j]));
}

// Part C: assemble the scaling recursion from the per-subsystem results and
// run the network-wide checks, filling the report on the way.
DesignStatus network_conditions(DesignReport& report, const Tolerances& tol) {
  const int m = static_cast<int>(report.subsystems.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd alpha(m), caps(m);
  for (int i = 0; i < m; ++i) {
    const auto& d = report.subsystems[static_cast<std::size_t>(i)];
    t(i, i) = d.error_set.lambda;
    for (const auto& [j, mu] : d.mu) t(i, j) = mu;
    alpha[i] = d.alpha;
    caps[i] = d.theta_tilde;
  }
  report.theta = assemble_theta_system(t, alpha, caps, tol);
  report.log.push_back("scaling recursion: spectral radius " + fmt(report.theta.rho));
  if (!(report.theta.rho < 1.0)) return DesignStatus::StoppedNotSchur;
  for (int i = 0; i < m; ++i) {
    if (!(report.theta.theta_bar[i] <= caps[i] - tol.interior_margin)) {
      report.log.push_back("scaling recursion: equilibrium component " + std::to_string(i) + " (" +
                           fmt(report.theta.theta_bar[i]) + ") reaches its cap " + fmt(caps[i]));
      return DesignStatus::StoppedEquilibriumOutside;
    }
  }
  report.admissible = maximal_invariant_set(report.theta, tol);
  report.inner_corner = inner_box_corner(report.admissible, tol);
  std::ostringstream corner;
  corner.precision(6);
  corner << report.inner_corner.transpose();
  report.log.push_back("scaling region: determined after " +
                       std::to_string(report.admissible.k_star) + " steps, box corner [" +
                       corner.str() + "]");
  return DesignStatus::Success;
}

// Keys above the removed index shift down by one.
template <typename V>
std::map<int, V> remap_without(const std::map<int, V>& in, int leaving) {
  std::map<int, V> out;
  for (const auto& [j, v] : in) {
    if (j == leaving) continue;
    out.emplace(j > leaving ? j - 1 : j, v);
  }
  return out;
}

}  // namespace

DesignReport design(const NetworkModel& model, const DesignConfig& config) {
  model.validate();
  const int m = model.size();
  if (!config.seeds.empty() && static_cast<int>(config.seeds.size()) != m)
    throw Error("design: seed list length does not match the network");

  DesignReport report;
  for (int i = 0; i < m; ++i) {
    SubsystemDesign d;
    DesignStatus why;
    if (!design_local(model.subsystems[static_cast<std::size_t>(i)], i, config, d, why,
                      report.log)) {
      report.status = why;
      report.stopped_at = i;
      return report;
    }
    report.subsystems.push_back(std::move(d));
  }
  for (int i = 0; i < m; ++i) {
    for (const int j : model.neighbors(i)) {
      design_edge(model, i, j, report.subsystems[static_cast<std::size_t>(i)].error_set.set,
                  report.subsystems[static_cast<std::size_t>(j)].error_set.set, config,
                  report.subsystems[static_cast<std::size_t>(i)], report.log);
    }
  }
  report.status = network_conditions(report, config.tol);
  return report;
}

PlugInOutcome plug_in(const NetworkModel& model, const DesignReport& report,
                      const PlugInRequest& request, const DesignConfig& config) {
  if (!report.success()) throw Error("plug_in: base design is not in a successful state");
  if (static_cast<int>(report.subsystems.size()) != model.size())
    throw Error("plug_in: report does not match the model");
  if (!config.seeds.empty()) throw Error("plug_in: explicit seed lists are not supported here");
  const int m = model.size();
  const int fresh = m;

  NetworkModel grown = model;
  grown.subsystems.push_back(request.subsystem);
  for (const auto& [q, block] : request.child_couplings) {
    if (q < 0 || q >= m) throw InvalidIndex("plug_in: child index " + std::to_string(q));
    grown.subsystems[static_cast<std::size_t>(q)].coupling[fresh] = block;
  }
  for (const auto& [q, flag] : request.child_deltas) {
    if (!request.child_couplings.count(q))
      throw ModelError("plug_in: exchange switch for child " + std::to_string(q) +
                       " has no coupling block");
    grown.subsystems[static_cast<std::size_t>(q)].delta[fresh] = flag;
  }
  grown.validate();

  PlugInOutcome outcome;
  std::vector<std::string> steps;

  // Part A for the newcomer only.
  SubsystemDesign newcomer;
  DesignStatus why;
  if (!design_local(grown.subsystems[static_cast<std::size_t>(fresh)], fresh, config, newcomer, why,
                    steps)) {
    outcome.status = why;
    outcome.model = model;
    outcome.report = report;
    return outcome;
  }

  // Part B for the newcomer's in-edges and for each child's new edge.
  DesignReport cand;
  cand.subsystems = report.subsystems;
  cand.log = report.log;
  cand.subsystems.push_back(std::move(newcomer));
  auto& mine = cand.subsystems.back();
  for (const int j : grown.neighbors(fresh)) {
    design_edge(grown, fresh, j, mine.error_set.set,
                cand.subsystems[static_cast<std::size_t>(j)].error_set.set, config, mine, steps);
  }
  for (const auto& [q, block] : request.child_couplings) {
    auto& child = cand.subsystems[static_cast<std::size_t>(q)];
    design_edge(grown, q, fresh, child.error_set.set, mine.error_set.set, config, child, steps);
  }

  for (const auto& line : steps) cand.log.push_back("plug-in: " + line);
  const DesignStatus status = network_conditions(cand, config.tol);
  if (status != DesignStatus::Success) {
    outcome.status = status;
    outcome.model = model;
    outcome.report = report;
    return outcome;
  }
  cand.status = DesignStatus::Success;
  outcome.accepted = true;
  outcome.status = DesignStatus::Success;
  outcome.model = std::move(grown);
  outcome.report = std::move(cand);
  return outcome;
}

UnplugOutcome unplug(const NetworkModel& model, const DesignReport& report, int leaving,
                     bool refresh, const DesignConfig& config) {
  if (!report.success()) throw Error("unplug: base design is not in a successful state");
  const int m = model.size();
  if (static_cast<int>(report.subsystems.size()) != m)
    throw Error("unplug: report does not match the model");
  if (leaving < 0 || leaving >= m) throw InvalidIndex("unplug: no subsystem " + std::to_string(leaving));
  if (m < 2) throw ModelError("unplug: cannot remove the last subsystem");
  const Tolerances& tol = config.tol;

  UnplugOutcome out;
  for (int i = 0; i < m; ++i) {
    if (i == leaving) continue;
    Subsystem sub = model.subsystems[static_cast<std::size_t>(i)];
    sub.coupling = remap_without(sub.coupling, leaving);
    sub.delta = remap_without(sub.delta, leaving);
    out.model.subsystems.push_back(std::move(sub));

    SubsystemDesign d = report.subsystems[static_cast<std::size_t>(i)];
    d.gains.cross = remap_without(d.gains.cross, leaving);
    d.gains.delta = remap_without(d.gains.delta, leaving);
    d.mu = remap_without(d.mu, leaving);
    out.report.subsystems.push_back(std::move(d));
  }
  out.report.log = report.log;
  out.report.log.push_back("unplug: removed subsystem " + std::to_string(leaving));

  // Reduced scaling recursion from the untouched per-subsystem results.
  const int mm = m - 1;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(mm, mm);
  Eigen::VectorXd alpha(mm), caps(mm);
  for (int i = 0; i < mm; ++i) {
    const auto& d = out.report.subsystems[static_cast<std::size_t>(i)];
    t(i, i) = d.error_set.lambda;
    for (const auto& [j, mu] : d.mu) t(i, j) = mu;
    alpha[i] = d.alpha;
    caps[i] = d.theta_tilde;
  }
  out.report.theta = assemble_theta_system(t, alpha, caps, tol);
  out.report.log.push_back("unplug: reduced spectral radius " + fmt(out.report.theta.rho));
  out.strongly_connected = out.model.is_strongly_connected();
  if (!out.strongly_connected)
    out.report.log.push_back("unplug: warning, remaining network is not strongly connected");
  if (!(out.report.theta.rho < 1.0)) {
    out.report.status = DesignStatus::StoppedNotSchur;
    return out;
  }
  for (int i = 0; i < mm; ++i) {
    if (!(out.report.theta.theta_bar[i] <= caps[i] - tol.interior_margin)) {
      out.report.status = DesignStatus::StoppedEquilibriumOutside;
      return out;
    }
  }

  // Slice the invariant region at theta_leaving = 0 (or rebuild on request).
  if (refresh) {
    out.report.admissible = maximal_invariant_set(out.report.theta, tol);
    out.report.log.push_back("unplug: scaling region rebuilt, determined after " +
                             std::to_string(out.report.admissible.k_star) + " steps");
  } else {
    std::vector<Eigen::VectorXd> normals;
    std::vector<double> rhs;
    for (Eigen::Index r = 0; r < report.admissible.row_normals.rows(); ++r) {
      Eigen::VectorXd h(mm);
      int c = 0;
      for (int j = 0; j < m; ++j) {
        if (j == leaving) continue;
        h[c++] = report.admissible.row_normals(r, j);
      }
      if (h.lpNorm<Eigen::Infinity>() <= 1e-15) continue;
      normals.push_back(h);
      rhs.push_back(report.admissible.row_rhs[r]);
    }
    out.report.admissible.row_normals.resize(static_cast<Eigen::Index>(normals.size()), mm);
    out.report.admissible.row_rhs.resize(static_cast<Eigen::Index>(rhs.size()));
    for (std::size_t r = 0; r < normals.size(); ++r) {
      out.report.admissible.row_normals.row(static_cast<Eigen::Index>(r)) =
          normals[r].transpose();
      out.report.admissible.row_rhs[static_cast<Eigen::Index>(r)] = rhs[r];
    }
    out.report.admissible.k_star = report.admissible.k_star;
    out.report.log.push_back("unplug: scaling region sliced (" +
                             std::to_string(normals.size()) + " rows kept)");
  }

  // Re-verify the three region properties by LP.
  const auto& inv = out.report.admissible;
  out.invariance_ok = true;
  for (Eigen::Index r = 0; r < inv.row_normals.rows() && out.invariance_ok; ++r) {
    const Eigen::VectorXd h = inv.row_normals.row(r).transpose();
    const double reach = region_support(inv, t.transpose() * h, tol) + h.dot(alpha);
    if (!(reach <= inv.row_rhs[r] + tol.row_slack)) out.invariance_ok = false;
  }
  out.admissibility_ok = true;
  for (int i = 0; i < mm && out.admissibility_ok; ++i) {
    const double reach = region_support(inv, Eigen::VectorXd::Unit(mm, i), tol);
    if (!(reach <= caps[i] + tol.row_slack)) out.admissibility_ok = false;
  }
  out.equilibrium_ok = inv.contains(out.report.theta.theta_bar, tol.row_slack);
  out.report.inner_corner = inner_box_corner(out.report.admissible, tol);
  out.report.status = DesignStatus::Success;
  return out;
}

DecentralizedInit decentralized_init(const DesignReport& report, double fraction,
                                     const std::vector<int>& generator_choice) {
  if (!report.success()) throw Error("decentralized_init: design is not in a successful state");
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw Error("decentralized_init: fraction must lie in [0, 1]");
  const int m = static_cast<int>(report.subsystems.size());
  if (!generator_choice.empty() && static_cast<int>(generator_choice.size()) != m)
    throw Error("decentralized_init: generator choice length does not match the network");

  DecentralizedInit init;
  init.theta0 = fraction * report.inner_corner;
  init.error0.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const ConvexBody& s = report.subsystems[static_cast<std::size_t>(i)].error_set.set;
    int g = generator_choice.empty() ? 0 : generator_choice[static_cast<std::size_t>(i)];
    if (g < 0 || g >= s.count())
      throw InvalidIndex("decentralized_init: generator " + std::to_string(g) + " of subsystem " +
                         std::to_string(i));
    init.error0.push_back(init.theta0[i] * s.generator(g));
  }
  return init;
}

}  // namespace dse
