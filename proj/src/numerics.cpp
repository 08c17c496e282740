#include "dse/numerics.hpp"

#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "dse/errors.hpp"

namespace dse {

void require_finite(const Eigen::MatrixXd& m, const char* label) {
  if (!m.allFinite()) {
    throw NonFinite(std::string(label) + ": non-finite entry");
  }
}

double spectral_radius(const Eigen::MatrixXd& m, const Tolerances&) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("spectral_radius: matrix must be square");
  }
  require_finite(m, "spectral_radius");
  if (m.rows() == 0) return 0.0;
  const Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw SingularMatrix("spectral_radius: eigenvalue iteration failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::VectorXd solve_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                             const Tolerances& tol) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw DimensionMismatch("solve_linear: need square A and matching b");
  }
  require_finite(a, "solve_linear");
  require_finite(b, "solve_linear");
  if (a.rows() == 0) return Eigen::VectorXd();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smax <= 0.0 || smin <= 0.0 || smax / smin > tol.condition_limit) {
    throw SingularMatrix("solve_linear: condition number above limit");
  }
  Eigen::VectorXd x = svd.solve(b);
  // One step of iterative refinement keeps the residual at the noise floor.
  x += svd.solve(b - a * x);
  const double residual = (a * x - b).lpNorm<Eigen::Infinity>();
  if (residual > tol.solve_residual * (1.0 + b.lpNorm<Eigen::Infinity>())) {
    throw SingularMatrix("solve_linear: residual check failed");
  }
  return x;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, const Tolerances& tol) {
  require_finite(m, "pseudo_inverse");
  if (m.size() == 0) return m.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = tol.rank_cutoff * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("matrix_exponential: matrix must be square");
  }
  require_finite(m, "matrix_exponential");
  return m.exp();
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int k) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("matrix_power: matrix must be square");
  }
  if (k < 0) throw Error("matrix_power: negative exponent");
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

int numerical_rank(const Eigen::MatrixXd& m, const Tolerances& tol) {
  require_finite(m, "numerical_rank");
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cutoff = tol.rank_cutoff * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace dse
