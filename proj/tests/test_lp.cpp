#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "dse/errors.hpp"
#include "dse/lp.hpp"
#include "dse/rng.hpp"
#include "oracles.hpp"

using namespace dse;

namespace {

LpProblem box_problem() {
  LpProblem p = make_lp(Eigen::Vector2d(1.0, 1.0));
  p.ineq_lhs.resize(2, 2);
  p.ineq_lhs << 1, 0, 0, 1;
  p.ineq_rhs = Eigen::Vector2d(1.0, 1.0);
  p.lower_bounds = {0.0, 0.0};
  return p;
}

}  // namespace

TEST_CASE("unit box maximum sits at the corner") {
  const LpOutcome out = solve_lp(box_problem());
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(out.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.x[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conflicting bound and row is infeasible") {
  LpProblem p = make_lp(Eigen::VectorXd::Ones(1));
  p.ineq_lhs.resize(1, 1);
  p.ineq_lhs << 1;
  p.ineq_rhs.resize(1);
  p.ineq_rhs << 1;
  p.lower_bounds = {2.0};
  CHECK(solve_lp(p).status == LpStatus::Infeasible);
}

TEST_CASE("missing ceiling is unbounded") {
  LpProblem p = make_lp(Eigen::VectorXd::Ones(1));
  p.lower_bounds = {0.0};
  CHECK(solve_lp(p).status == LpStatus::Unbounded);

  // Same conclusion when an unrelated constraint is present.
  LpProblem q = make_lp(Eigen::Vector2d(0.0, 1.0));
  q.ineq_lhs.resize(1, 2);
  q.ineq_lhs << 1, 0;
  q.ineq_rhs.resize(1);
  q.ineq_rhs << 1;
  CHECK(solve_lp(q).status == LpStatus::Unbounded);
}

TEST_CASE("equality with free variables") {
  LpProblem p = make_lp(Eigen::Vector2d(1.0, 1.0));
  p.eq_lhs.resize(1, 2);
  p.eq_lhs << 1, 1;
  p.eq_rhs.resize(1);
  p.eq_rhs << 1;
  const LpOutcome out = solve_lp(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("minimum-weight representation of a point in a box") {
  // min sum(c) s.t. sum(c_k v_k) = x over the four box corners; the answer is
  // the infinity norm of x.
  Eigen::MatrixXd corners(2, 4);
  corners << 1, 1, -1, -1,
             1, -1, 1, -1;
  LpProblem p = make_lp(Eigen::VectorXd::Constant(4, -1.0));
  p.eq_lhs = corners;
  p.eq_rhs = Eigen::Vector2d(0.5, 0.0);
  p.lower_bounds.assign(4, 0.0);
  const LpOutcome out = solve_lp(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(-out.value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("Beale's cycling example terminates at the known optimum") {
  LpProblem p = make_lp(Eigen::Vector4d(0.75, -150.0, 0.02, -6.0));
  p.ineq_lhs.resize(3, 4);
  p.ineq_lhs << 0.25, -60, -0.04, 9,
                0.5, -90, -0.02, 3,
                0, 0, 1, 0;
  p.ineq_rhs = Eigen::Vector3d(0.0, 0.0, 1.0);
  p.lower_bounds.assign(4, 0.0);
  const LpOutcome out = solve_lp(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("all-zero rows are dropped or decide feasibility") {
  LpProblem p = make_lp(Eigen::VectorXd::Zero(1));
  p.eq_lhs = Eigen::MatrixXd::Zero(1, 1);
  p.eq_rhs = Eigen::VectorXd::Zero(1);
  p.lower_bounds = {0.0};
  CHECK(solve_lp(p).status == LpStatus::Optimal);

  p.eq_rhs[0] = 1.0;
  CHECK(solve_lp(p).status == LpStatus::Infeasible);
}

TEST_CASE("malformed problems are rejected") {
  LpProblem p = make_lp(Eigen::Vector2d(1.0, 1.0));
  p.ineq_lhs.resize(1, 2);
  p.ineq_lhs << 1, 1;
  p.ineq_rhs.resize(2);
  p.ineq_rhs << 1, 1;
  CHECK_THROWS_AS(solve_lp(p), DimensionMismatch);

  LpProblem q = make_lp(Eigen::Vector2d(1.0, std::nan("")));
  CHECK_THROWS_AS(solve_lp(q), NonFinite);

  LpProblem r = box_problem();
  r.lower_bounds = {0.0};
  CHECK_THROWS_AS(solve_lp(r), DimensionMismatch);
}

TEST_CASE("identical input gives identical output") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const LpProblem p = testing::random_lp(rng);
    const LpOutcome a = solve_lp(p);
    const LpOutcome b = solve_lp(p);
    CHECK(a.status == b.status);
    CHECK(a.pivots == b.pivots);
    if (a.status == LpStatus::Optimal) {
      CHECK(a.value == b.value);
      CHECK(a.x == b.x);
    }
  }
}

TEST_CASE("random instances agree with vertex enumeration") {
  Rng rng(20260823);
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const LpProblem p = testing::random_lp(rng);
    const LpOutcome got = solve_lp(p);
    const testing::OracleResult want = testing::lp_oracle(p);
    INFO("trial ", trial);
    REQUIRE(got.status == want.status);
    if (got.status == LpStatus::Optimal) {
      ++optimal;
      CHECK(std::abs(got.value - want.value) <=
            1e-7 * (1.0 + std::abs(want.value)));
      // Returned optimizer must satisfy the constraints it was given.
      for (Eigen::Index i = 0; i < p.ineq_lhs.rows(); ++i) {
        CHECK(p.ineq_lhs.row(i).dot(got.x) <=
              p.ineq_rhs[i] + 1e-9 * (1.0 + std::abs(p.ineq_rhs[i])));
      }
      for (Eigen::Index i = 0; i < p.eq_lhs.rows(); ++i) {
        CHECK(std::abs(p.eq_lhs.row(i).dot(got.x) - p.eq_rhs[i]) <=
              1e-9 * (1.0 + std::abs(p.eq_rhs[i])));
      }
      for (int j = 0; j < p.num_vars(); ++j) {
        if (!p.lower_bounds.empty() && p.lower_bounds[j]) {
          CHECK(got.x[j] >= *p.lower_bounds[j] - 1e-9);
        }
      }
    } else if (got.status == LpStatus::Infeasible) {
      ++infeasible;
    } else {
      ++unbounded;
    }
  }
  // The generator should actually exercise all three outcomes.
  CHECK(optimal > 50);
  CHECK(infeasible > 10);
  CHECK(unbounded > 10);
}
