#include "dse/contractive_set.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dse/errors.hpp"
#include "dse/numerics.hpp"

namespace dse {

int nilpotency_index(const Eigen::MatrixXd& abar) {
  if (abar.rows() != abar.cols()) throw DimensionMismatch("nilpotency_index: matrix must be square");
  const int n = static_cast<int>(abar.rows());
  const double base = 1.0 + abar.norm();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  double budget = 1.0;
  for (int s = 0; s <= n; ++s) {
    if (power.norm() <= 1e-12 * budget) return s;
    power = abar * power;
    budget *= base;
  }
  return -1;
}

ContractiveSet synthesize_contractive_set(const Eigen::MatrixXd& abar, const HPolytope& region,
                                          const ConvexBody& seed, int k, const Tolerances& tol) {
  const int n = seed.dim();
  if (abar.rows() != n || abar.cols() != n)
    throw DimensionMismatch("synthesize_contractive_set: map is " + std::to_string(abar.rows()) +
                            "x" + std::to_string(abar.cols()) + " but the seed lives in dimension " +
                            std::to_string(n));
  if (region.dim() != n)
    throw DimensionMismatch("synthesize_contractive_set: region dimension does not match the seed");
  require_finite(abar, "synthesize_contractive_set: map");
  if (k < 1) throw Error("synthesize_contractive_set: horizon must be at least 1");

  // Forward images S^0 .. S^k of the seed, pruned as we go.
  std::vector<ConvexBody> images;
  images.reserve(static_cast<std::size_t>(k) + 1);
  images.push_back(prune_generators(seed, tol));
  for (int s = 1; s <= k; ++s)
    images.push_back(prune_generators(linear_image(abar, images.back()), tol));

  ContractiveSet out;
  out.k = k;
  out.gamma = containment_factor(images.back(), images.front(), tol);
  if (!(out.gamma < 1.0))
    throw NotContractive("synthesize_contractive_set: image after " + std::to_string(k) +
                             " steps does not contract into the seed (factor " +
                             std::to_string(out.gamma) + ")",
                         out.gamma);

  ConvexBody sum = images.front();
  for (int s = 1; s < k; ++s) sum = minkowski_sum(sum, images[s], tol);
  sum = prune_generators(sum, tol);

  // Worst stretch against the region, accumulated per image: the support
  // function of a Minkowski sum is the sum of the supports.
  double beta = 0.0;
  for (int r = 0; r < region.rows().rows(); ++r) {
    const Eigen::VectorXd h = region.rows().row(r).transpose();
    double acc = 0.0;
    for (int s = 0; s < k; ++s) acc += support(images[s], h);
    beta = std::max(beta, acc);
  }
  if (!(beta > 0))
    throw NotACSet("synthesize_contractive_set: seed has no extent against the region");
  out.beta = beta;
  out.delta = std::max(1.0, containment_factor(sum, images.front(), tol));
  out.lambda = (out.delta + out.gamma - 1.0) / out.delta;
  out.set = scale(sum, 1.0 / beta);

  // Postconditions: the set touches the region boundary from inside, and the
  // closed-loop image contracts by at least the reported factor.
  const double stretch = h_stretch(out.set, region);
  if (std::abs(stretch - 1.0) > 1e-6)
    throw Error("synthesize_contractive_set: normalized set does not touch the region (stretch " +
                std::to_string(stretch) + ")");
  const double achieved = containment_factor(linear_image(abar, out.set), out.set, tol);
  if (achieved > out.lambda + tol.lambda_slack)
    throw Error("synthesize_contractive_set: contraction check failed (achieved " +
                std::to_string(achieved) + " vs reported " + std::to_string(out.lambda) + ")");
  return out;
}

}  // namespace dse
