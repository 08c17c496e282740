#pragma once

// Seedable random source with platform-independent output.  std::mt19937_64
// itself is fully specified, but the standard distributions are not, so the
// uniform helpers below derive doubles directly from the raw 64-bit stream:
//   uniform01() = (next() >> 11) * 2^-53              in [0, 1)
//   uniform(a,b) = a + (b - a) * uniform01()
//   uniform_int(lo,hi) = lo + floor(uniform01() * span)
// Identical seeds therefore give bit-identical sequences on every platform.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dse {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Inclusive bounds.
  int uniform_int(int lo, int hi) {
    const int span = hi - lo + 1;
    int k = static_cast<int>(uniform01() * span);
    if (k >= span) k = span - 1;
    return lo + k;
  }

  // Componentwise uniform over the box [-radii, radii].
  Eigen::VectorXd uniform_box(const Eigen::VectorXd& radii) {
    Eigen::VectorXd x(radii.size());
    for (Eigen::Index j = 0; j < radii.size(); ++j) {
      x[j] = uniform(-radii[j], radii[j]);
    }
    return x;
  }

  Eigen::VectorXd gaussian(Eigen::Index n) {
    Eigen::VectorXd x(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      // Box-Muller on the deterministic uniforms keeps the stream portable.
      double u1 = uniform01();
      while (u1 <= 0.0) u1 = uniform01();
      const double u2 = uniform01();
      x[j] = std::sqrt(-2.0 * std::log(u1)) *
             std::cos(6.283185307179586476925286766559 * u2);
    }
    return x;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dse
