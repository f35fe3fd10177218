#include "cfree/lie/so3.hpp"

#include <cmath>

#include "cfree/errors.hpp"

namespace cfree {

Eigen::Matrix3d hat(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v(2), v(1),
       v(2), 0.0, -v(0),
       -v(1), v(0), 0.0;
  return m;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("vee: matrix is not antisymmetric");
  }
  return {m(2, 1), m(0, 2), m(1, 0)};
}

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& v) {
  const double theta2 = v.squaredNorm();
  const double theta = std::sqrt(theta2);
  double s;  // sin(theta)/theta
  double k;  // (1 - cos(theta))/theta^2
  if (theta < 1e-4) {
    s = 1.0 - theta2 / 6.0 * (1.0 - theta2 / 20.0 * (1.0 - theta2 / 42.0));
    k = 0.5 - theta2 / 24.0 * (1.0 - theta2 / 30.0 * (1.0 - theta2 / 56.0));
  } else {
    s = std::sin(theta) / theta;
    const double half = std::sin(0.5 * theta);
    k = 2.0 * half * half / theta2;
  }
  const Eigen::Matrix3d w = hat(v);
  return Eigen::Matrix3d::Identity() + s * w + k * (w * w);
}

}  // namespace cfree
