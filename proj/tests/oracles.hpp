#pragma once

// Test-only reference implementations, kept deliberately independent of the
// production algorithms so the two can be compared:
//  - lp_oracle: vertex enumeration over all candidate active sets inside a
//    huge artificial box; unboundedness shows up as the optimum sticking to
//    the box walls.
//  - hull_member: convex-hull membership by feasibility LP over convex
//    weights (used to cross-check gauge-based membership).
//  - invariant_rows_oracle: plain constraint propagation for the scaling
//    dynamics, with per-row redundancy elimination at a fixed horizon.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dse/lp.hpp"
#include "dse/rng.hpp"

namespace dse::testing {

struct OracleResult {
  LpStatus status;
  double value = 0.0;
};

namespace detail {

struct BoxedBest {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
};

BoxedBest boxed_best(const LpProblem& p, double big);

}  // namespace detail

// Enumerates vertices inside a huge artificial box at two box sizes; a
// bounded problem gives the same optimum for both, an unbounded one grows
// with the box.
inline OracleResult lp_oracle(const LpProblem& p) {
  const detail::BoxedBest small = detail::boxed_best(p, 1e7);
  if (!small.feasible) return {LpStatus::Infeasible, 0.0};
  const detail::BoxedBest large = detail::boxed_best(p, 2e7);
  if (large.value > small.value + 1e-6 * (1.0 + std::abs(small.value))) {
    return {LpStatus::Unbounded, 0.0};
  }
  return {LpStatus::Optimal, small.value};
}

inline detail::BoxedBest detail::boxed_best(const LpProblem& p, double big) {
  const int n = p.num_vars();
  struct Row {
    Eigen::VectorXd a;
    double b;
    bool eq;
    bool wall;
  };
  std::vector<Row> rows;
  for (Eigen::Index i = 0; i < p.eq_lhs.rows(); ++i) {
    rows.push_back({p.eq_lhs.row(i).transpose(), p.eq_rhs[i], true, false});
  }
  for (Eigen::Index i = 0; i < p.ineq_lhs.rows(); ++i) {
    rows.push_back({p.ineq_lhs.row(i).transpose(), p.ineq_rhs[i], false, false});
  }
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    if (!p.lower_bounds.empty() && p.lower_bounds[j]) {
      a[j] = -1.0;
      rows.push_back({a, -*p.lower_bounds[j], false, false});
    }
  }
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    a[j] = 1.0;
    rows.push_back({a, big, false, true});
    rows.push_back({-a, big, false, true});
  }

  const int total = static_cast<int>(rows.size());
  BoxedBest best;

  auto feasible = [&](const Eigen::VectorXd& x) {
    for (const auto& r : rows) {
      const double v = r.a.dot(x) - r.b;
      const double slack = 1e-7 * (1.0 + std::abs(r.b));
      if (r.eq ? std::abs(v) > slack : v > slack) return false;
    }
    return true;
  };

  // Enumerate all n-subsets of rows as candidate active sets.
  std::vector<int> idx(n);
  std::function<void(int, int)> recurse = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd A(n, n);
      Eigen::VectorXd b(n);
      for (int k = 0; k < n; ++k) {
        A.row(k) = rows[idx[k]].a.transpose();
        b[k] = rows[idx[k]].b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      lu.setThreshold(1e-9);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      if (!x.allFinite() || !feasible(x)) return;
      best.feasible = true;
      best.value = std::max(best.value, p.objective.dot(x));
      return;
    }
    for (int i = start; i <= total - (n - depth); ++i) {
      idx[depth] = i;
      recurse(i + 1, depth + 1);
    }
  };
  if (n == 0) {
    best.feasible = true;
    best.value = 0.0;
    return best;
  }
  recurse(0, 0);
  return best;
}

// Convex-hull membership by direct feasibility over convex weights with a
// small residual allowance; formulated without any gauge machinery.
inline bool hull_member(const Eigen::MatrixXd& gens, const Eigen::VectorXd& x,
                        double slack = 1e-9) {
  const int k = static_cast<int>(gens.cols());
  const int n = static_cast<int>(gens.rows());
  LpProblem p = make_lp(Eigen::VectorXd::Zero(k + n));
  p.eq_lhs = Eigen::MatrixXd::Zero(n + 1, k + n);
  p.eq_lhs.topLeftCorner(n, k) = gens;
  p.eq_lhs.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  p.eq_lhs.row(n).head(k).setOnes();
  p.eq_rhs.resize(n + 1);
  p.eq_rhs.head(n) = x;
  p.eq_rhs[n] = 1.0;
  p.ineq_lhs = Eigen::MatrixXd::Zero(2 * n, k + n);
  p.ineq_rhs = Eigen::VectorXd::Constant(2 * n, slack);
  for (int j = 0; j < n; ++j) {
    p.ineq_lhs(2 * j, k + j) = 1.0;
    p.ineq_lhs(2 * j + 1, k + j) = -1.0;
  }
  p.lower_bounds.assign(k + n, std::nullopt);
  for (int j = 0; j < k; ++j) p.lower_bounds[j] = 0.0;
  return solve_lp(p).status == LpStatus::Optimal;
}

// max of dir . theta over { normals theta <= rhs, theta >= 0 }; +infinity
// when unbounded, throws when infeasible (the orthant sets used in tests
// always contain 0).
inline double orthant_row_max(const Eigen::MatrixXd& normals, const Eigen::VectorXd& rhs,
                              const Eigen::VectorXd& dir) {
  LpProblem p = make_lp(dir);
  p.ineq_lhs = normals;
  p.ineq_rhs = rhs;
  p.lower_bounds.assign(static_cast<std::size_t>(dir.size()), std::optional<double>(0.0));
  const LpOutcome out = solve_lp(p);
  if (out.status == LpStatus::Unbounded) return std::numeric_limits<double>::infinity();
  if (out.status != LpStatus::Optimal) throw std::runtime_error("orthant_row_max: infeasible");
  return out.value;
}

struct PropagatedRows {
  Eigen::MatrixXd normals;
  Eigen::VectorXd rhs;
};

// Brute-force constraint propagation for theta+ = T theta + alpha inside
// [0, caps]: emits the rows (e_i' T^k) theta <= caps_i - e_i' sum_{j<k} T^j a
// for every k up to the horizon, then removes rows implied by the remaining
// ones (sequential LP elimination).
inline PropagatedRows invariant_rows_oracle(const Eigen::MatrixXd& t, const Eigen::VectorXd& alpha,
                                            const Eigen::VectorXd& caps, int horizon) {
  const int m = static_cast<int>(alpha.size());
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> rhs;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd drift = Eigen::VectorXd::Zero(m);
  for (int k = 0; k <= horizon; ++k) {
    for (int i = 0; i < m; ++i) {
      normals.push_back(power.row(i).transpose());
      rhs.push_back(caps[i] - drift[i]);
    }
    drift += power * alpha;
    power = power * t;
  }

  const int total = static_cast<int>(normals.size());
  std::vector<bool> alive(total, true);
  for (int r = 0; r < total; ++r) {
    Eigen::MatrixXd others(total, m);
    Eigen::VectorXd others_rhs(total);
    int cnt = 0;
    for (int s = 0; s < total; ++s) {
      if (s == r || !alive[s]) continue;
      others.row(cnt) = normals[s].transpose();
      others_rhs[cnt] = rhs[s];
      ++cnt;
    }
    if (cnt == 0) continue;
    const double best = orthant_row_max(others.topRows(cnt), others_rhs.head(cnt), normals[r]);
    if (best <= rhs[r] + 1e-9) alive[r] = false;
  }

  PropagatedRows out;
  int kept = 0;
  for (int r = 0; r < total; ++r) kept += alive[r] ? 1 : 0;
  out.normals.resize(kept, m);
  out.rhs.resize(kept);
  int cnt = 0;
  for (int r = 0; r < total; ++r) {
    if (!alive[r]) continue;
    out.normals.row(cnt) = normals[r].transpose();
    out.rhs[cnt] = rhs[r];
    ++cnt;
  }
  return out;
}

// { normals_a theta <= rhs_a, theta >= 0 } inside the region described by
// rows b (every b-row's maximum over the a-region stays under its rhs).
inline bool rows_subset_of(const Eigen::MatrixXd& normals_a, const Eigen::VectorXd& rhs_a,
                           const Eigen::MatrixXd& normals_b, const Eigen::VectorXd& rhs_b,
                           double slack = 1e-8) {
  for (Eigen::Index r = 0; r < normals_b.rows(); ++r) {
    const double best = orthant_row_max(normals_a, rhs_a, normals_b.row(r).transpose());
    if (!(best <= rhs_b[r] + slack)) return false;
  }
  return true;
}

// Random small LP with a mix of statuses; coefficients are rounded so that
// degenerate ties actually occur.
inline LpProblem random_lp(Rng& rng) {
  const int n = rng.uniform_int(1, 3);
  const int me = rng.uniform_int(0, 1);
  const int mi = rng.uniform_int(1, 6);
  auto coin = [&](double p) { return rng.uniform01() < p; };
  auto coeff = [&]() { return std::round(rng.uniform(-2.0, 2.0) * 100.0) / 100.0; };

  LpProblem p;
  p.objective.resize(n);
  for (int j = 0; j < n; ++j) p.objective[j] = coeff();
  p.eq_lhs.resize(me, n);
  p.eq_rhs.resize(me);
  for (int i = 0; i < me; ++i) {
    for (int j = 0; j < n; ++j) p.eq_lhs(i, j) = coeff();
    p.eq_rhs[i] = coeff();
  }
  p.ineq_lhs.resize(mi, n);
  p.ineq_rhs.resize(mi);
  for (int i = 0; i < mi; ++i) {
    for (int j = 0; j < n; ++j) p.ineq_lhs(i, j) = coeff();
    p.ineq_rhs[i] = std::round(rng.uniform(-1.0, 2.0) * 100.0) / 100.0;
  }
  p.lower_bounds.assign(n, std::nullopt);
  for (int j = 0; j < n; ++j) {
    if (coin(0.7)) p.lower_bounds[j] = std::round(rng.uniform(-2.0, 0.0) * 100.0) / 100.0;
  }
  return p;
}

}  // namespace dse::testing
