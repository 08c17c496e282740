#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "dse/design.hpp"
#include "dse/errors.hpp"
#include "dse/verify.hpp"

using namespace dse;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

Subsystem full_state_sub(const Eigen::MatrixXd& a, double w_radius = 1e-4) {
  Subsystem s;
  s.a = a;
  s.b = Eigen::MatrixXd::Zero(2, 0);
  s.c = Eigen::MatrixXd::Identity(2, 2);
  s.d = Eigen::MatrixXd::Identity(2, 2);
  s.disturbance_set = ConvexBody::axis_box(Eigen::VectorXd::Constant(2, w_radius));
  s.error_region = HPolytope::axis_box(Eigen::VectorXd::Ones(2));
  return s;
}

NetworkModel mild_pair() {
  NetworkModel model;
  Subsystem s0 = full_state_sub(mat2(0.5, 0.1, 0, 0.3));
  s0.coupling[1] = mat2(0.1, 0, 0, 0.1);
  Subsystem s1 = full_state_sub(mat2(0.4, 0, 0.2, 0.2));
  s1.coupling[0] = mat2(0, 0.05, 0.05, 0);
  model.subsystems = {s0, s1};
  return model;
}

// Partial measurements, so the cross couplings survive with real factors.
NetworkModel fragile_pair() {
  NetworkModel model;
  for (int i = 0; i < 2; ++i) {
    Subsystem s;
    s.a = mat2(1, 1, 0, 1);
    s.b = Eigen::MatrixXd::Zero(2, 0);
    s.c = Eigen::MatrixXd::Zero(1, 2);
    s.c(0, 0) = 1.0;
    s.d = Eigen::MatrixXd::Identity(2, 2);
    s.disturbance_set = ConvexBody::axis_box(Eigen::VectorXd::Constant(2, 0.01));
    s.error_region = HPolytope::axis_box(Eigen::VectorXd::Ones(2));
    s.coupling[1 - i] = mat2(0.05, 0, 0, 0.05);
    model.subsystems.push_back(s);
  }
  return model;
}

}  // namespace

TEST_CASE("clean design verifies with nonnegative margins") {
  const NetworkModel model = mild_pair();
  const DesignReport report = design(model);
  REQUIRE(report.success());
  const VerifyReport v = verify_design(model, report);
  CHECK(v.ok);
  CHECK(v.failure.empty());
  CHECK(v.checked == 4 + 200);  // corners of the box plus the random draws
  CHECK(v.worst_admissibility >= -1e-7);
  CHECK(v.worst_invariance >= -1e-7);
  CHECK(v.worst_recursion >= -1e-9);
}

TEST_CASE("coupled partial-output design verifies too") {
  const NetworkModel model = fragile_pair();
  const DesignReport report = design(model);
  REQUIRE(report.success());
  const VerifyReport v = verify_design(model, report);
  CHECK(v.ok);
  // Cross factors are real here, so the invariance margin is tight at the
  // corner where both scalings peak.
  CHECK(v.worst_invariance >= -1e-7);
  CHECK(v.worst_invariance <= 0.2);
}

TEST_CASE("verification is reproducible") {
  const NetworkModel model = fragile_pair();
  const DesignReport report = design(model);
  const VerifyReport a = verify_design(model, report);
  const VerifyReport b = verify_design(model, report);
  CHECK(a.worst_admissibility == b.worst_admissibility);
  CHECK(a.worst_invariance == b.worst_invariance);
  CHECK(a.worst_recursion == b.worst_recursion);
}

TEST_CASE("an understated cross factor is caught at a box corner") {
  const NetworkModel model = fragile_pair();
  DesignReport report = design(model);
  REQUIRE(report.success());
  REQUIRE(report.theta.t(0, 1) > 0.01);

  DesignReport corrupted = report;
  corrupted.theta.t(0, 1) *= 0.5;  // claim half the true coupling factor
  const VerifyReport v = verify_design(model, corrupted);
  CHECK(!v.ok);
  CHECK(v.worst_invariance < -1e-7);
  CHECK(v.failure.find("successor set") != std::string::npos);

  // The violation needs the neighbor's scaling: corner-only, not at zero.
  VerifyConfig no_draws;
  no_draws.samples = 0;
  const VerifyReport corners_only = verify_design(model, corrupted, no_draws);
  CHECK(!corners_only.ok);
}

TEST_CASE("an understated self factor is caught") {
  const NetworkModel model = fragile_pair();
  DesignReport report = design(model);
  DesignReport corrupted = report;
  corrupted.theta.t(0, 0) *= 0.5;
  const VerifyReport v = verify_design(model, corrupted);
  CHECK(!v.ok);
  CHECK(v.worst_invariance < -1e-7);
}

TEST_CASE("tampered gains change the recomputed factors and fail") {
  const NetworkModel model = fragile_pair();
  DesignReport report = design(model);
  DesignReport corrupted = report;
  corrupted.subsystems[0].gains.self.setZero();  // open-loop errors diverge
  const VerifyReport v = verify_design(model, corrupted);
  CHECK(!v.ok);
  CHECK(v.worst_invariance < -1e-7);
}

TEST_CASE("a shrunken invariant region row is caught by the recursion check") {
  const NetworkModel model = fragile_pair();
  DesignReport report = design(model);
  DesignReport corrupted = report;
  corrupted.admissible.row_rhs[0] *= 0.4;
  const VerifyReport v = verify_design(model, corrupted);
  CHECK(!v.ok);
  CHECK(v.worst_recursion < -1e-9);
}

TEST_CASE("rejects mismatched inputs") {
  const NetworkModel model = mild_pair();
  const DesignReport report = design(model);
  NetworkModel solo;
  solo.subsystems = {full_state_sub(mat2(0.5, 0, 0, 0.5))};
  CHECK_THROWS_AS(verify_design(solo, report), Error);

  DesignReport stopped = report;
  stopped.status = DesignStatus::StoppedNotSchur;
  CHECK_THROWS_AS(verify_design(model, stopped), Error);
}
