#include "dse/lp.hpp"

#include <cmath>
#include <limits>

#include "dse/errors.hpp"

namespace dse {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

LpProblem make_lp(const Eigen::VectorXd& objective) {
  LpProblem p;
  p.objective = objective;
  p.eq_lhs.resize(0, objective.size());
  p.eq_rhs.resize(0);
  p.ineq_lhs.resize(0, objective.size());
  p.ineq_rhs.resize(0);
  return p;
}

namespace {

void validate(const LpProblem& p) {
  const Eigen::Index n = p.objective.size();
  if (p.eq_lhs.rows() != p.eq_rhs.size() ||
      p.ineq_lhs.rows() != p.ineq_rhs.size()) {
    throw DimensionMismatch("lp: row count mismatch between lhs and rhs");
  }
  if ((p.eq_lhs.rows() > 0 && p.eq_lhs.cols() != n) ||
      (p.ineq_lhs.rows() > 0 && p.ineq_lhs.cols() != n)) {
    throw DimensionMismatch("lp: constraint column count does not match objective");
  }
  if (!p.lower_bounds.empty() &&
      static_cast<Eigen::Index>(p.lower_bounds.size()) != n) {
    throw DimensionMismatch("lp: lower_bounds must be empty or one per variable");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!p.objective.allFinite() || !p.eq_lhs.allFinite() ||
      !p.eq_rhs.allFinite() || !p.ineq_lhs.allFinite() ||
      !p.ineq_rhs.allFinite()) {
    throw NonFinite("lp: non-finite entry in problem data");
  }
  for (const auto& lb : p.lower_bounds) {
    if (lb && !finite(*lb)) throw NonFinite("lp: non-finite lower bound");
  }
}

enum VarKind : unsigned char { kNonneg, kFree, kArtificial };

// Fully assembled standard-form problem: maximize c.z, Az = b, selected z >= 0.
struct Tableau {
  Eigen::MatrixXd A;           // m x total
  Eigen::VectorXd b;           // >= 0 after sign fixing
  Eigen::VectorXd c;           // phase-2 objective over all columns
  std::vector<VarKind> kind;   // per column
  int n = 0;                   // structural columns
  int m = 0;                   // rows
  int total = 0;               // structural + slack + artificial columns
};

class Simplex {
 public:
  Simplex(Tableau t, const Tolerances& tol)
      : t_(std::move(t)), tol_(tol) {
    const int m = t_.m;
    basic_.resize(m);
    in_basis_.assign(t_.total, false);
    banned_.assign(t_.total, false);
    for (int i = 0; i < m; ++i) {
      const int j = t_.total - m + i;
      basic_[i] = j;
      in_basis_[j] = true;
    }
    binv_ = Eigen::MatrixXd::Identity(m, m);
    xb_ = t_.b;
  }

  // Runs phase 1 then phase 2.  Returns the final status; on Optimal the
  // structural solution is in solution().
  LpStatus run() {
    // Phase 1: maximize -sum(artificials).
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(t_.total);
    for (int j = 0; j < t_.total; ++j) {
      if (t_.kind[j] == kArtificial) c1[j] = -1.0;
    }
    const LpStatus s1 = iterate(c1, /*phase1=*/true);
    if (s1 != LpStatus::Optimal) {
      // Phase 1 is bounded below by construction; anything else is numerical
      // breakdown, reported as the closest honest status.
      return s1;
    }
    double art_sum = 0.0;
    for (int i = 0; i < t_.m; ++i) {
      if (t_.kind[basic_[i]] == kArtificial) art_sum += std::max(0.0, xb_[i]);
    }
    if (art_sum > tol_.lp_feasibility * (1.0 + t_.b.lpNorm<1>())) {
      return LpStatus::Infeasible;
    }
    // From here on artificials must stay at zero: ban them from entering and
    // treat any still in the basis as fixed in the ratio test.
    for (int j = 0; j < t_.total; ++j) {
      if (t_.kind[j] == kArtificial) banned_[j] = true;
    }
    phase2_ = true;
    return iterate(t_.c, /*phase1=*/false);
  }

  Eigen::VectorXd column_values() const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(t_.total);
    for (int i = 0; i < t_.m; ++i) z[basic_[i]] = xb_[i];
    return z;
  }

  int pivots() const { return pivots_; }

 private:
  LpStatus iterate(const Eigen::VectorXd& c, bool phase1) {
    const int m = t_.m;
    while (true) {
      if (pivots_ >= tol_.lp_pivot_cap) {
        throw CycleLimitExceeded("lp: pivot cap exceeded");
      }
      const bool bland = pivots_ >= tol_.lp_bland_after;

      // Reduced costs over nonbasic, unbanned columns.
      Eigen::VectorXd y(m);
      {
        Eigen::VectorXd cb(m);
        for (int i = 0; i < m; ++i) cb[i] = c[basic_[i]];
        y = binv_.transpose() * cb;
      }
      int enter = -1;
      int dir = +1;
      double best = tol_.lp_reduced_cost;
      for (int j = 0; j < t_.total; ++j) {
        if (in_basis_[j] || banned_[j]) continue;
        if (phase1 && t_.kind[j] == kArtificial) continue;
        const double d = c[j] - t_.A.col(j).dot(y);
        double gain = 0.0;
        int sigma = +1;
        if (t_.kind[j] == kFree) {
          gain = std::abs(d);
          sigma = d > 0.0 ? +1 : -1;
        } else {
          gain = d;
        }
        if (gain > best) {
          best = gain;
          enter = j;
          dir = sigma;
          if (bland) break;  // lowest-index eligible column
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      const Eigen::VectorXd w = binv_ * t_.A.col(enter);
      // Ratio test along direction dir.  Ties prefer driving artificials out;
      // under Bland's rule the tie break is strictly lowest variable index so
      // the anti-cycling argument applies.
      int leave = -1;
      double t_star = std::numeric_limits<double>::infinity();
      int leave_priority = -1;
      for (int i = 0; i < m; ++i) {
        const double u = dir * w[i];
        const int bj = basic_[i];
        const bool fixed = phase2_ && t_.kind[bj] == kArtificial;
        double ratio = std::numeric_limits<double>::infinity();
        if (fixed) {
          if (std::abs(u) > tol_.lp_feasibility) ratio = 0.0;
        } else if (t_.kind[bj] != kFree && u > tol_.lp_feasibility) {
          ratio = std::max(0.0, xb_[i]) / u;
        }
        if (ratio == std::numeric_limits<double>::infinity()) continue;
        const int priority =
            !bland && t_.kind[bj] == kArtificial ? 1 : 0;
        bool better = ratio < t_star - 1e-12;
        if (!better && ratio < t_star + 1e-12 && leave >= 0) {
          better = priority > leave_priority ||
                   (priority == leave_priority && bj < basic_[leave]);
        }
        if (leave < 0 || better) {
          t_star = std::min(t_star, ratio);
          leave = i;
          leave_priority = priority;
        }
      }
      if (leave < 0) {
        if (phase1) {
          // The phase-1 objective is bounded; an unblocked ray here means the
          // numerics collapsed.
          throw Error("lp: unbounded phase-1 ray (numerical breakdown)");
        }
        return LpStatus::Unbounded;
      }

      // Update values, basis bookkeeping and the explicit inverse.
      xb_ -= t_star * (dir * w);
      const int out = basic_[leave];
      in_basis_[out] = false;
      in_basis_[enter] = true;
      basic_[leave] = enter;
      xb_[leave] = dir * t_star;

      const double piv = w[leave];
      binv_.row(leave) /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave) continue;
        const double f = w[i];
        if (f != 0.0) binv_.row(i) -= f * binv_.row(leave);
      }
      ++pivots_;
      if (pivots_ % 128 == 0) refresh();
    }
  }

  // Recompute the basis inverse and basic values from scratch to shed the
  // drift accumulated by rank-one updates.
  void refresh() {
    const int m = t_.m;
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = t_.A.col(basic_[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    binv_ = lu.inverse();
    xb_ = binv_ * t_.b;
  }

  Tableau t_;
  const Tolerances& tol_;
  std::vector<int> basic_;
  std::vector<char> in_basis_;
  std::vector<char> banned_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  bool phase2_ = false;
  int pivots_ = 0;
};

}  // namespace

LpOutcome solve_lp(const LpProblem& p, const Tolerances& tol) {
  validate(p);
  const int n = p.num_vars();

  // Shift lower-bounded variables to zero.
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(n);
  std::vector<VarKind> varkind(n, kFree);
  if (!p.lower_bounds.empty()) {
    for (int j = 0; j < n; ++j) {
      if (p.lower_bounds[j]) {
        shift[j] = *p.lower_bounds[j];
        varkind[j] = kNonneg;
      }
    }
  }

  // Collect scaled nonzero rows; drop or decide trivially on zero rows.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  std::vector<bool> is_eq;
  auto add_rows = [&](const Eigen::MatrixXd& lhs, const Eigen::VectorXd& r,
                      bool eq) -> bool {
    for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
      const double scale = lhs.row(i).cwiseAbs().maxCoeff();
      const double b = r[i] - lhs.row(i).dot(shift);
      if (scale <= 0.0) {
        const bool ok = eq ? std::abs(b) <= tol.lp_feasibility
                           : b >= -tol.lp_feasibility;
        if (!ok) return false;  // 0 = b or 0 <= b violated outright
        continue;
      }
      rows.push_back(lhs.row(i).transpose() / scale);
      rhs.push_back(b / scale);
      is_eq.push_back(eq);
    }
    return true;
  };
  if (!add_rows(p.eq_lhs, p.eq_rhs, true) ||
      !add_rows(p.ineq_lhs, p.ineq_rhs, false)) {
    return {LpStatus::Infeasible, 0.0, {}, 0};
  }
  const int m = static_cast<int>(rows.size());

  LpOutcome out;
  if (m == 0) {
    // Only bounds remain: the optimum sits at the bounds unless some objective
    // direction is unblocked.
    for (int j = 0; j < n; ++j) {
      const double cj = p.objective[j];
      const bool unblocked = varkind[j] == kFree ? std::abs(cj) > tol.lp_reduced_cost
                                                 : cj > tol.lp_reduced_cost;
      if (unblocked) return {LpStatus::Unbounded, 0.0, {}, 0};
    }
    out.status = LpStatus::Optimal;
    out.x = shift;
    out.value = p.objective.dot(shift);
    return out;
  }

  const int n_slack = [&] {
    int k = 0;
    for (bool e : is_eq) k += e ? 0 : 1;
    return k;
  }();
  Tableau t;
  t.n = n;
  t.m = m;
  t.total = n + n_slack + m;
  t.A = Eigen::MatrixXd::Zero(m, t.total);
  t.b.resize(m);
  t.c = Eigen::VectorXd::Zero(t.total);
  t.c.head(n) = p.objective;
  t.kind = varkind;
  t.kind.resize(t.total, kNonneg);
  int slack = n;
  for (int i = 0; i < m; ++i) {
    t.A.row(i).head(n) = rows[i].transpose();
    t.b[i] = rhs[i];
    if (!is_eq[i]) t.A(i, slack++) = 1.0;
    // Make the right-hand side nonnegative so the artificial start is feasible.
    if (t.b[i] < 0.0) {
      t.A.row(i) = -t.A.row(i);
      t.b[i] = -t.b[i];
    }
    const int art = n + n_slack + i;
    t.A(i, art) = 1.0;
    t.kind[art] = kArtificial;
  }

  Simplex simplex(std::move(t), tol);
  const LpStatus status = simplex.run();
  out.status = status;
  out.pivots = simplex.pivots();
  if (status != LpStatus::Optimal) return out;

  const Eigen::VectorXd z = simplex.column_values();
  out.x = z.head(n) + shift;
  out.value = p.objective.dot(out.x);

  // Sanity check against silent numerical corruption.  Violations here are
  // solver bugs or badly conditioned bases, not modelling errors.
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    const double r = rows[i].dot(out.x - shift) - rhs[i];
    worst = std::max(worst, is_eq[i] ? std::abs(r) : r);
  }
  for (int j = 0; j < n; ++j) {
    if (varkind[j] == kNonneg) worst = std::max(worst, shift[j] - out.x[j]);
  }
  if (worst > 1e-6) {
    throw Error("lp: optimal basis failed feasibility validation");
  }
  return out;
}

}  // namespace dse
