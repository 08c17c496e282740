// Acceptance gate for the toolkit: ten end-to-end checks, one line of output
// each ("PASS"/"FAIL" plus the measured quantity and its pinned tolerance).
// The process exits nonzero when any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dse/contractive_set.hpp"
#include "dse/convex_body.hpp"
#include "dse/design.hpp"
#include "dse/h_polytope.hpp"
#include "dse/lp.hpp"
#include "dse/network_model.hpp"
#include "dse/numerics.hpp"
#include "dse/observer_design.hpp"
#include "dse/power_network.hpp"
#include "dse/rng.hpp"
#include "dse/simulation.hpp"
#include "dse/theta_invariance.hpp"
#include "dse/theta_system.hpp"
#include "dse/verify.hpp"
#include "oracles.hpp"

using namespace dse;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) m.col(j) = rng.gaussian(rows);
  return m;
}

NetworkModel scenario_model(const std::string& name) {
  return build_power_network(builtin_scenario(name));
}

// Relative smallest singular value of [C; CA; ...; CA^(n-1)].  Gates the
// random draws below: gains blow up as a pair approaches unobservability,
// and with them the floating-point residual of the closed loop's n-th
// power, so "observable" must mean observable with a margin.
double observability_margin(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
  const int n = static_cast<int>(a.rows());
  const int p = static_cast<int>(c.rows());
  Eigen::MatrixXd obs(p * n, n);
  Eigen::MatrixXd block = c;
  for (int k = 0; k < n; ++k) {
    obs.middleRows(k * p, p) = block;
    block = block * a;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(obs);
  return svd.singularValues().minCoeff() / svd.singularValues().maxCoeff();
}

// 1. Deadbeat gains on random observable pairs: the closed loop must be
//    numerically nilpotent, and designing 100 of them must be fast.
Outcome deadbeat_settling() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0;
  int done = 0;
  while (done < 100) {
    const int n = rng.uniform_int(1, 5);
    const int p = rng.uniform_int(1, n);
    const Eigen::MatrixXd a = random_matrix(rng, n, n);
    const Eigen::MatrixXd c = random_matrix(rng, p, n);
    if (observability_rank(a, c) < n || observability_margin(a, c) < 1e-2) continue;
    const Eigen::MatrixXd l = design_deadbeat_gain(a, c);
    worst = std::max(worst, matrix_power(a + l * c, n).norm());
    ++done;
  }
  const double elapsed = seconds_since(start);
  Outcome out;
  out.ok = worst <= 1e-6 && elapsed < 5.0;
  out.detail = "100 random observable pairs, n <= 5: worst |(A+LC)^n|_F = " + num(worst) +
               " (tol 1e-6) in " + num(elapsed) + " s (limit 5 s)";
  return out;
}

// 2. Every error set shipped with the built-in scenarios honours its own
//    contract: the closed-loop image contracts by the reported lambda, the
//    set sits inside the admissible region, and lambda matches the
//    horizon/containment formula it was derived from.
Outcome contractive_contract() {
  double worst_excess = -1e300;
  double worst_formula = 0;
  bool contained = true;
  int sets = 0;
  for (const char* name : {"example1", "example2", "example3"}) {
    const NetworkModel model = scenario_model(name);
    const DesignReport report = design(model);
    for (std::size_t i = 0; i < report.subsystems.size(); ++i) {
      const SubsystemDesign& d = report.subsystems[i];
      const Subsystem& sub = model.subsystems[i];
      const Eigen::MatrixXd abar = error_block_self(sub.a, d.gains.self, sub.c);
      const double factor =
          containment_factor(linear_image(abar, d.error_set.set), d.error_set.set);
      worst_excess = std::max(worst_excess, factor - d.error_set.lambda);
      contained = contained && contained_in_h(d.error_set.set, sub.error_region);
      const double formula = (d.error_set.delta + d.error_set.gamma - 1.0) / d.error_set.delta;
      worst_formula = std::max(worst_formula, std::abs(d.error_set.lambda - formula));
      ++sets;
    }
  }
  Outcome out;
  out.ok = worst_excess <= 1e-8 && contained && worst_formula <= 1e-10;
  out.detail = std::to_string(sets) + " synthesized sets: contraction-factor excess " +
               num(worst_excess) + " (tol 1e-8), region containment " +
               (contained ? "holds" : "FAILS") + ", factor-formula gap " + num(worst_formula) +
               " (tol 1e-10)";
  return out;
}

// 3. The independent design checker confirms both successful scenario
//    designs on corners plus 200 random draws, with margins that are at
//    worst rounding noise, within a 60 s budget.
Outcome randomized_verification() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 1e300;
  bool all_ok = true;
  int checked = 0;
  for (const char* name : {"example2", "example3"}) {
    const NetworkModel model = scenario_model(name);
    const DesignReport report = design(model);
    all_ok = all_ok && report.success();
    VerifyConfig vc;
    vc.samples = 200;
    vc.seed = 7;
    const VerifyReport vr = verify_design(model, report, vc);
    all_ok = all_ok && vr.ok;
    worst = std::min({worst, vr.worst_admissibility, vr.worst_invariance, vr.worst_recursion});
    checked += vr.checked;
  }
  const double elapsed = seconds_since(start);
  Outcome out;
  out.ok = all_ok && worst >= -1e-7 && elapsed < 60.0;
  out.detail = "both successful scenarios re-checked on " + std::to_string(checked) +
               " scaling vectors: worst margin " + num(worst) + " (floor -1e-7) in " +
               num(elapsed) + " s (limit 60 s)";
  return out;
}

// 4. With speed-only measurements the couplings cannot be cancelled and the
//    scaling recursion must be diagnosed as unstable, not silently patched.
Outcome speed_only_stop() {
  const NetworkModel model = scenario_model("example1");
  const DesignReport report = design(model);
  Outcome out;
  out.ok = report.status == DesignStatus::StoppedNotSchur && report.theta.rho > 1.0;
  out.detail = std::string("speed-only scenario stops with status \"") +
               to_string(report.status) + "\", recursion spectral radius " +
               num(report.theta.rho) + " (> 1 required)";
  return out;
}

// 5. With angle+speed measurements every coupling is cancelled exactly, the
//    scaling recursion decouples, and the admissible region is already
//    invariant (no constraint propagation needed).
Outcome exact_cancellation() {
  const NetworkModel model = scenario_model("example2");
  const DesignReport report = design(model);
  Outcome out;
  if (!report.success()) {
    out.detail = std::string("angle+speed scenario stopped: ") + to_string(report.status);
    return out;
  }
  double worst_cross = 0;
  for (std::size_t i = 0; i < model.subsystems.size(); ++i) {
    for (const auto& [j, a_ij] : model.subsystems[i].coupling) {
      const EstimatorGains& g = report.subsystems[i].gains;
      const Eigen::MatrixXd res =
          error_block_cross(a_ij, g.delta.at(j), g.cross.at(j), model.subsystems[j].c);
      worst_cross = std::max(worst_cross, res.norm());
    }
  }
  const Eigen::MatrixXd& t = report.theta.t;
  const double diag_max = t.diagonal().maxCoeff();
  const double offdiag_max = (t - Eigen::MatrixXd(t.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  double support_gap = 0;
  for (int i = 0; i < report.theta.size(); ++i) {
    Eigen::VectorXd axis = Eigen::VectorXd::Zero(report.theta.size());
    axis[i] = 1.0;
    support_gap = std::max(support_gap, std::abs(region_support(report.admissible, axis) -
                                                 report.theta.theta_tilde[i]));
  }
  out.ok = worst_cross <= 1e-10 && diag_max < 1.0 && offdiag_max <= 1e-12 &&
           report.admissible.k_star == 0 && support_gap <= 1e-9;
  out.detail = "worst residual coupling block |A_ij + L_ij C_j|_F = " + num(worst_cross) +
               " (tol 1e-10); recursion diagonal max " + num(diag_max) +
               " (< 1), off-diagonal max " + num(offdiag_max) +
               "; admissible region already invariant (k* = " +
               std::to_string(report.admissible.k_star) + ", axis-support gap " +
               num(support_gap) + ")";
  return out;
}

// 6. Noise-free simulation of the fully cancelled design settles to machine
//    zero within n = 4 steps from every extreme point of every error set.
Outcome exact_settling() {
  const NetworkModel model = scenario_model("example2");
  const DesignReport report = design(model);
  Outcome out;
  if (!report.success()) {
    out.detail = "design stopped unexpectedly";
    return out;
  }
  const int m = model.size();
  std::vector<int> counts(m);
  long long product = 1;
  for (int i = 0; i < m; ++i) {
    counts[i] = static_cast<int>(report.subsystems[i].error_set.set.generators().cols());
    product = std::min<long long>(product * counts[i], 100000);
  }
  std::vector<std::vector<int>> choices;
  if (product <= 20000) {
    std::vector<int> digits(m, 0);
    while (true) {
      choices.push_back(digits);
      int pos = 0;
      while (pos < m && ++digits[pos] == counts[pos]) digits[pos++] = 0;
      if (pos == m) break;
    }
  } else {
    const int top = *std::max_element(counts.begin(), counts.end());
    for (int g = 0; g < top; ++g) {
      std::vector<int> choice(m);
      for (int i = 0; i < m; ++i) choice[i] = g % counts[i];
      choices.push_back(choice);
    }
    Rng rng(606);
    for (int s = 0; s < 200; ++s) {
      std::vector<int> choice(m);
      for (int i = 0; i < m; ++i) choice[i] = rng.uniform_int(0, counts[i] - 1);
      choices.push_back(choice);
    }
  }
  double worst_tail = 0;
  double smallest_start = 1e300;
  for (const std::vector<int>& choice : choices) {
    SimulationConfig sc;
    sc.steps = 8;
    sc.disturbance = DisturbanceMode::None;
    sc.init_fraction = 1.0;
    sc.init_generators = choice;
    const SimulationTrace trace = simulate(model, report, sc);
    for (int t = 4; t <= sc.steps; ++t) worst_tail = std::max(worst_tail, trace.max_error[t]);
    smallest_start = std::min(smallest_start, trace.max_error[0]);
  }
  out.ok = worst_tail <= 1e-8;
  out.detail = std::to_string(choices.size()) +
               " extreme-point initializations, no noise: worst |e(t)|_inf for t >= 4 is " +
               num(worst_tail) + " (tol 1e-8; initial errors were >= " + num(smallest_start) +
               ")";
  return out;
}

// 7. Fifty disturbed steps from the scaled-set boundary never leave either
//    the admissible region or the scaled sets, across ten noise seeds.
Outcome disturbed_containment() {
  const NetworkModel model = scenario_model("example3");
  const DesignReport report = design(model);
  Outcome out;
  if (!report.success()) {
    out.detail = "design stopped unexpectedly";
    return out;
  }
  const int m = model.size();
  int violations = 0;
  int flags = 0;
  for (int seed = 0; seed < 10; ++seed) {
    SimulationConfig sc;
    sc.steps = 50;
    sc.seed = static_cast<unsigned long long>(seed);
    sc.disturbance = DisturbanceMode::Uniform;
    sc.init_fraction = 1.0;
    sc.init_generators.resize(m);
    for (int i = 0; i < m; ++i) {
      const int count = static_cast<int>(report.subsystems[i].error_set.set.generators().cols());
      sc.init_generators[i] = seed % count;
    }
    const SimulationTrace trace = simulate(model, report, sc);
    violations += trace.violations;
    flags += 2 * m * static_cast<int>(trace.in_region.size());
  }
  out.ok = violations == 0;
  out.detail = "10 seeds x 50 disturbed steps: " + std::to_string(violations) + " of " +
               std::to_string(flags) +
               " containment flags violated (admissible region exact, set gauge slack 1e-7)";
  return out;
}

// 8. The maximal invariant scaling region matches a plain constraint
//    propagation oracle on random two-subsystem recursions.
Outcome invariant_region_oracle() {
  Rng rng(808);
  bool all = true;
  int worst_k = 0;
  int done = 0;
  while (done < 20) {
    Eigen::MatrixXd t(2, 2);
    t << rng.uniform(0, 0.6), rng.uniform(0, 0.9), rng.uniform(0, 0.9), rng.uniform(0, 0.6);
    if (spectral_radius(t) > 0.9) continue;
    Eigen::VectorXd alpha(2), caps(2);
    alpha << rng.uniform(0, 0.05), rng.uniform(0, 0.05);
    // Alternate balanced and strongly asymmetric caps: the latter force the
    // propagation to actually run a step or two before rows go redundant.
    if (done % 2 == 0)
      caps << rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5);
    else
      caps << rng.uniform(0.1, 0.4), rng.uniform(1.0, 8.0);
    const ThetaSystem ts = assemble_theta_system(t, alpha, caps);
    if ((ts.theta_bar.array() > caps.array() - 0.05).any()) continue;
    const ThetaInvariantSet inv = maximal_invariant_set(ts);
    worst_k = std::max(worst_k, inv.k_star);
    if (inv.k_star > 18) {
      all = false;
      break;
    }
    const testing::PropagatedRows oracle = testing::invariant_rows_oracle(t, alpha, caps, 20);
    all = all &&
          testing::rows_subset_of(inv.row_normals, inv.row_rhs, oracle.normals, oracle.rhs, 1e-8) &&
          testing::rows_subset_of(oracle.normals, oracle.rhs, inv.row_normals, inv.row_rhs, 1e-8);
    ++done;
  }
  Outcome out;
  out.ok = all && done == 20;
  out.detail = "20 random two-subsystem recursions (spectral radius <= 0.9): region " +
               std::string(all ? "matches" : "DIFFERS FROM") +
               " the constraint-propagation oracle both ways (slack 1e-8, max determination "
               "index " +
               std::to_string(worst_k) + ")";
  return out;
}

// Two- or three-subsystem chain with single-output subsystems (nothing can
// cancel these couplings, so removals genuinely change the recursion).
NetworkModel random_partial_output_network(Rng& rng) {
  NetworkModel model;
  const int m = rng.uniform_int(2, 3);
  for (int i = 0; i < m; ++i) {
    Subsystem s;
    s.a = mat2(1, rng.uniform(0.6, 1.2), 0, 1);
    s.b = Eigen::MatrixXd::Zero(2, 0);
    s.c = Eigen::MatrixXd::Zero(1, 2);
    s.c(0, 0) = 1.0;
    s.d = Eigen::MatrixXd::Identity(2, 2);
    const double w = rng.uniform01() < 0.3 ? 0.0 : rng.uniform(1e-5, 2e-4);
    s.disturbance_set = w == 0.0 ? ConvexBody::origin(2)
                                 : ConvexBody::axis_box(Eigen::VectorXd::Constant(2, w));
    s.error_region = HPolytope::axis_box(Eigen::VectorXd::Ones(2));
    model.subsystems.push_back(s);
  }
  for (int i = 0; i < m; ++i)
    model.subsystems[i].coupling[(i + 1) % m] =
        rng.uniform(0.01, 0.06) * Eigen::MatrixXd::Identity(2, 2);
  if (m == 3 && rng.uniform01() < 0.5)
    model.subsystems[0].coupling[2] = rng.uniform(0.01, 0.06) * Eigen::MatrixXd::Identity(2, 2);
  return model;
}

// 9. Removing any single subsystem (scenario designs plus 50 random
//    networks) never raises the spectral radius, keeps the reduced
//    equilibrium admissible, and leaves the sliced scaling region invariant.
Outcome removal_properties() {
  Rng rng(909);
  bool all = true;
  double worst_rho_gap = -1e300;
  int networks = 0;
  int removals = 0;

  const auto check_removals = [&](const NetworkModel& model, const DesignReport& report) {
    for (int leaving = 0; leaving < model.size(); ++leaving) {
      const UnplugOutcome outcome = unplug(model, report, leaving);
      ++removals;
      worst_rho_gap = std::max(worst_rho_gap, outcome.report.theta.rho - report.theta.rho);
      if (outcome.report.theta.rho > report.theta.rho + 1e-12) all = false;
      if (!(outcome.invariance_ok && outcome.admissibility_ok && outcome.equilibrium_ok))
        all = false;
      const Eigen::VectorXd& bar = outcome.report.theta.theta_bar;
      const Eigen::VectorXd& caps = outcome.report.theta.theta_tilde;
      if (bar.size() != caps.size() || (bar.array() < -1e-12).any() ||
          (bar.array() > caps.array() + 1e-12).any())
        all = false;
      const ThetaInvariantSet& inv = outcome.report.admissible;
      for (int s = 0; s < 100; ++s) {
        Eigen::VectorXd draw(caps.size());
        for (int i = 0; i < caps.size(); ++i) draw[i] = rng.uniform(0, caps[i]);
        double scale = 1.0;
        for (int r = 0; r < inv.row_normals.rows(); ++r) {
          const double along = inv.row_normals.row(r).dot(draw);
          if (along > 1e-15) scale = std::min(scale, inv.row_rhs[r] / along);
        }
        const Eigen::VectorXd inside = scale * draw;
        if (!inv.contains(outcome.report.theta.t * inside + outcome.report.theta.alpha, 1e-8))
          all = false;
      }
    }
  };

  for (const char* name : {"example2", "example3"}) {
    const NetworkModel model = scenario_model(name);
    const DesignReport report = design(model);
    if (!report.success()) {
      all = false;
      continue;
    }
    check_removals(model, report);
  }
  int attempts = 0;
  while (networks < 50 && attempts < 500) {
    ++attempts;
    const NetworkModel model = random_partial_output_network(rng);
    const DesignReport report = design(model);
    if (!report.success()) continue;
    ++networks;
    check_removals(model, report);
  }

  Outcome out;
  out.ok = all && networks == 50;
  out.detail = std::to_string(removals) + " single-subsystem removals over 2 scenario + " +
               std::to_string(networks) +
               " random designs: worst spectral-radius change " + num(worst_rho_gap) +
               " (cap 1e-12), equilibrium/invariance/admissibility and 100-sample slice "
               "invariance " +
               (all ? "hold" : "FAIL");
  return out;
}

// 10. The simplex solver agrees with brute-force vertex enumeration on 500
//     random small problems.
Outcome lp_against_enumeration() {
  Rng rng(1010);
  int mismatched = 0;
  int optimal = 0;
  double worst = 0;
  for (int k = 0; k < 500; ++k) {
    const LpProblem problem = testing::random_lp(rng);
    const testing::OracleResult oracle = testing::lp_oracle(problem);
    LpOutcome mine;
    try {
      mine = solve_lp(problem);
    } catch (const std::exception&) {
      ++mismatched;
      continue;
    }
    if (mine.status != oracle.status) {
      ++mismatched;
      continue;
    }
    if (mine.status == LpStatus::Optimal) {
      ++optimal;
      worst = std::max(worst, std::abs(mine.value - oracle.value));
    }
  }
  Outcome out;
  out.ok = mismatched == 0 && worst <= 1e-7;
  out.detail = "500 random problems vs vertex enumeration: " + std::to_string(mismatched) +
               " status mismatches, worst value gap " + num(worst) + " (tol 1e-7, " +
               std::to_string(optimal) + " optimal instances)";
  return out;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> checks = {
      {"deadbeat gains settle", deadbeat_settling},
      {"error sets honour their contract", contractive_contract},
      {"independent design verification", randomized_verification},
      {"speed-only design stops honestly", speed_only_stop},
      {"angle+speed design cancels couplings", exact_cancellation},
      {"noise-free settling in four steps", exact_settling},
      {"disturbed runs stay contained", disturbed_containment},
      {"invariant region matches oracle", invariant_region_oracle},
      {"subsystem removal keeps guarantees", removal_properties},
      {"LP solver matches enumeration", lp_against_enumeration},
  };
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome out;
    try {
      out = checks[i].run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("unexpected exception: ") + e.what();
    }
    std::printf("[%2zu/10] %s  %s: %s\n", i + 1, out.ok ? "PASS" : "FAIL", checks[i].name,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failures;
  }
  if (failures == 0)
    std::printf("all 10 checks passed\n");
  else
    std::printf("%d of 10 checks FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
