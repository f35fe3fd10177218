#include "cfree/lie/gl2.hpp"

#include <cmath>

namespace cfree {

Eigen::Matrix2d gl2_exp(const Eigen::Matrix2d& a) {
  const double mu = 0.5 * (a(0, 0) + a(1, 1));
  Eigen::Matrix2d b = a;
  b(0, 0) -= mu;
  b(1, 1) -= mu;
  const double q = b(0, 0) * b(0, 0) + b(0, 1) * b(1, 0);

  double c;  // sum q^k / (2k)!
  double s;  // sum q^k / (2k+1)!
  if (std::abs(q) < 1e-6) {
    c = 1.0 + q / 2.0 * (1.0 + q / 12.0 * (1.0 + q / 30.0));
    s = 1.0 + q / 6.0 * (1.0 + q / 20.0 * (1.0 + q / 42.0));
  } else if (q > 0.0) {
    const double r = std::sqrt(q);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else {
    const double r = std::sqrt(-q);
    c = std::cos(r);
    s = std::sin(r) / r;
  }
  const double scale = std::exp(mu);
  return scale * (c * Eigen::Matrix2d::Identity() + s * b);
}

}  // namespace cfree
