#include "dse/observer_design.hpp"

#include <cmath>
#include <vector>

#include "dse/errors.hpp"
#include "dse/lp.hpp"
#include "dse/numerics.hpp"

namespace dse {

const char* to_string(CouplingMode mode) {
  return mode == CouplingMode::Frobenius ? "frobenius" : "direct_mu";
}

int observability_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c,
                       const Tolerances& tol) {
  if (a.rows() != a.cols() || c.cols() != a.rows()) {
    throw DimensionMismatch("observability_rank: incompatible A and C");
  }
  const int n = static_cast<int>(a.rows());
  const int p = static_cast<int>(c.rows());
  Eigen::MatrixXd obs(n * p, n);
  Eigen::MatrixXd block = c;
  for (int k = 0; k < n; ++k) {
    obs.middleRows(k * p, p) = block;
    block = block * a;
  }
  return numerical_rank(obs, tol);
}

Eigen::MatrixXd design_deadbeat_gain(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& c,
                                     const Tolerances& tol) {
  if (a.rows() != a.cols() || c.cols() != a.rows() || c.rows() < 1) {
    throw DimensionMismatch("design_deadbeat_gain: incompatible A and C");
  }
  require_finite(a, "design_deadbeat_gain");
  require_finite(c, "design_deadbeat_gain");
  const int n = static_cast<int>(a.rows());
  const int p = static_cast<int>(c.rows());

  const int rank = observability_rank(a, c, tol);
  if (rank < n) {
    throw NotObservable("design_deadbeat_gain: pair is not observable", rank);
  }

  const Eigen::MatrixXd f = a.transpose();
  const Eigen::MatrixXd g = c.transpose();  // n x p

  // Starting column: the largest of G, fixed tie-break on the lower index.
  int j_star = 0;
  for (int j = 1; j < p; ++j) {
    if (g.col(j).norm() > g.col(j_star).norm()) j_star = j;
  }
  const double g_norm = g.col(j_star).norm();
  if (g_norm <= 1e-14 * (1.0 + g.cwiseAbs().maxCoeff())) {
    throw NotObservable("design_deadbeat_gain: output map is numerically zero",
                        rank);
  }

  // Grow a chain x_{t+1} = (F x_t + G u_t) / rho_t of unit vectors keeping the
  // span growing; candidate inputs are u = 0 and scaled unit inputs, with a
  // preference for u = 0 when it is at least half as good as the best.
  Eigen::MatrixXd x_chain(n, n);       // normalized chain states
  Eigen::MatrixXd u_chain = Eigen::MatrixXd::Zero(p, n);
  Eigen::MatrixXd q_basis(n, n);       // orthonormal basis of the chain span
  x_chain.col(0) = g.col(j_star) / g_norm;
  q_basis.col(0) = x_chain.col(0);

  for (int t = 0; t + 1 < n; ++t) {
    const Eigen::VectorXd fx = f * x_chain.col(t);
    const double input_scale = 1.0 + fx.norm();

    auto residual_norm = [&](const Eigen::VectorXd& cand) {
      Eigen::VectorXd r = cand;
      for (int q = 0; q <= t; ++q) {
        r -= q_basis.col(q).dot(cand) * q_basis.col(q);
      }
      return r.norm();
    };

    double best_res = residual_norm(fx);
    int best_u = -1;  // -1 encodes u = 0
    const double zero_res = best_res;
    for (int j = 0; j < p; ++j) {
      const double gj = g.col(j).norm();
      if (gj <= 1e-14 * input_scale) continue;
      const Eigen::VectorXd cand = fx + g.col(j) * (input_scale / gj);
      const double res = residual_norm(cand);
      if (res > best_res) {
        best_res = res;
        best_u = j;
      }
    }
    if (best_u >= 0 && zero_res >= 0.5 * best_res) {
      best_u = -1;
      best_res = zero_res;
    }
    if (best_res <= 1e-12 * input_scale) {
      // Cannot happen for observable pairs with exact arithmetic; the rank
      // check above passed, so this is numerical collapse.
      throw NotObservable("design_deadbeat_gain: chain construction collapsed",
                          rank);
    }

    Eigen::VectorXd u = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd next = fx;
    if (best_u >= 0) {
      const double s = input_scale / g.col(best_u).norm();
      u[best_u] = s;
      next += g.col(best_u) * s;
    }
    const double rho = next.norm();
    x_chain.col(t + 1) = next / rho;
    u_chain.col(t) = u / rho;  // keeps (F + G M) x_t = rho * x_{t+1} consistent

    // Extend the orthonormal basis.
    Eigen::VectorXd r = x_chain.col(t + 1);
    for (int q = 0; q <= t; ++q) r -= q_basis.col(q).dot(r) * q_basis.col(q);
    q_basis.col(t + 1) = r / r.norm();
  }

  // M maps chain states to their inputs; beyond the chain it does not matter.
  Eigen::MatrixXd m;
  {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(x_chain);
    if (!lu.isInvertible()) {
      throw NotObservable("design_deadbeat_gain: chain matrix is singular",
                          rank);
    }
    m = u_chain * lu.inverse();
  }

  const Eigen::MatrixXd f_tilde = f + g * m;
  const Eigen::VectorXd b = x_chain.col(0);

  // Ackermann step on the single-input pair (F~, b): K has characteristic
  // polynomial lambda^n, i.e. k0 = -e_n^T Krylov^{-1} F~^n.
  Eigen::MatrixXd krylov(n, n);
  Eigen::VectorXd v = b;
  for (int k = 0; k < n; ++k) {
    krylov.col(k) = v;
    v = f_tilde * v;
  }
  Eigen::RowVectorXd e_n = Eigen::RowVectorXd::Zero(n);
  e_n[n - 1] = 1.0;
  const Eigen::FullPivLU<Eigen::MatrixXd> klu(krylov);
  if (!klu.isInvertible()) {
    throw NotObservable("design_deadbeat_gain: chain lost controllability", rank);
  }
  const Eigen::RowVectorXd k0 =
      -(e_n * klu.inverse()) * matrix_power(f_tilde, n);

  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(p);
  gamma[j_star] = 1.0 / g_norm;
  const Eigen::MatrixXd k_mat = m + gamma * k0;  // p x n
  const Eigen::MatrixXd l = k_mat.transpose();

  const double closed = matrix_power(a + l * c, n).norm();
  const double budget =
      tol.nilpotent_slack * std::pow(1.0 + a.norm(), n);
  if (!(closed <= budget)) {
    throw Error("design_deadbeat_gain: closed loop failed the nilpotency check");
  }
  return l;
}

namespace {

Eigen::MatrixXd coupling_gain_direct_mu(const Eigen::MatrixXd& a_ij,
                                        const Eigen::MatrixXd& c_j,
                                        const ConvexBody& s_j,
                                        const ConvexBody& s_i,
                                        const Tolerances& tol) {
  const int ni = static_cast<int>(a_ij.rows());
  const int pj = static_cast<int>(c_j.rows());
  const int kj = s_j.count();
  const int ki = s_i.count();

  // Variables: vec(L) column-major (ni*pj, free), cone weights per generator
  // of S_j (kj*ki, nonnegative), then mu.
  const int nl = ni * pj;
  const int nvars = nl + kj * ki + 1;
  const int mu_var = nvars - 1;

  LpProblem p;
  p.objective = Eigen::VectorXd::Zero(nvars);
  p.objective[mu_var] = -1.0;  // minimize mu
  p.eq_lhs = Eigen::MatrixXd::Zero(kj * ni, nvars);
  p.eq_rhs.resize(kj * ni);
  p.ineq_lhs = Eigen::MatrixXd::Zero(kj, nvars);
  p.ineq_rhs = Eigen::VectorXd::Zero(kj);
  p.lower_bounds.assign(nvars, std::nullopt);
  for (int w = nl; w < nvars; ++w) p.lower_bounds[w] = 0.0;

  for (int mgen = 0; mgen < kj; ++mgen) {
    const Eigen::VectorXd vm = s_j.generator(mgen);
    const Eigen::VectorXd ym = c_j * vm;
    // sum_k c_k u_k - L ym = A_ij vm  (ni rows)
    for (int r = 0; r < ni; ++r) {
      const int row = mgen * ni + r;
      for (int k = 0; k < ki; ++k) {
        p.eq_lhs(row, nl + mgen * ki + k) = s_i.generators()(r, k);
      }
      for (int s = 0; s < pj; ++s) {
        p.eq_lhs(row, s * ni + r) = -ym[s];
      }
      p.eq_rhs[row] = a_ij.row(r).dot(vm);
    }
    // sum_k c_k <= mu
    for (int k = 0; k < ki; ++k) p.ineq_lhs(mgen, nl + mgen * ki + k) = 1.0;
    p.ineq_lhs(mgen, mu_var) = -1.0;
  }

  const LpOutcome out = solve_lp(p, tol);
  if (out.status != LpStatus::Optimal) {
    throw Error(std::string("design_coupling_gain: direct_mu LP ") +
                to_string(out.status));
  }
  Eigen::MatrixXd l(ni, pj);
  for (int s = 0; s < pj; ++s) l.col(s) = out.x.segment(s * ni, ni);
  return l;
}

}  // namespace

Eigen::MatrixXd design_coupling_gain(const Eigen::MatrixXd& a_ij,
                                     const Eigen::MatrixXd& c_j,
                                     CouplingMode mode, const ConvexBody* s_j,
                                     const ConvexBody* s_i,
                                     const Tolerances& tol) {
  if (c_j.cols() != a_ij.cols() || c_j.rows() < 1) {
    throw DimensionMismatch("design_coupling_gain: incompatible A_ij and C_j");
  }
  require_finite(a_ij, "design_coupling_gain");
  require_finite(c_j, "design_coupling_gain");
  if (mode == CouplingMode::Frobenius) {
    return -a_ij * pseudo_inverse(c_j, tol);
  }
  if (s_j == nullptr || s_i == nullptr) {
    throw Error("design_coupling_gain: direct_mu mode needs both bodies");
  }
  if (s_j->dim() != a_ij.cols() || s_i->dim() != a_ij.rows()) {
    throw DimensionMismatch("design_coupling_gain: body dimensions mismatch");
  }
  return coupling_gain_direct_mu(a_ij, c_j, *s_j, *s_i, tol);
}

Eigen::MatrixXd error_block_self(const Eigen::MatrixXd& a_ii,
                                 const Eigen::MatrixXd& l_ii,
                                 const Eigen::MatrixXd& c_i) {
  return a_ii + l_ii * c_i;
}

Eigen::MatrixXd error_block_cross(const Eigen::MatrixXd& a_ij, int delta,
                                  const Eigen::MatrixXd& l_ij,
                                  const Eigen::MatrixXd& c_j) {
  if (delta == 0) return a_ij;
  return a_ij + l_ij * c_j;
}

int suggest_delta_revision(const Eigen::MatrixXd& l_ij, int delta,
                           const Tolerances& tol) {
  if (l_ij.norm() <= tol.zero_gain) return 0;
  return delta;
}

}  // namespace dse
