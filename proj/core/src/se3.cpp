#include "cfree/lie/se3.hpp"

#include <cmath>

#include "cfree/lie/so3.hpp"

namespace cfree {

Se3Group operator*(const Se3Group& a, const Se3Group& b) {
  return {a.g * b.g, a.g * b.u + a.u};
}

Se3Group inverse(const Se3Group& a) {
  const Eigen::Matrix3d gt = a.g.transpose();
  return {gt, -(gt * a.u)};
}

Se3Algebra bracket(const Se3Algebra& a, const Se3Algebra& b) {
  return {a.xi.cross(b.xi), a.xi.cross(b.u) - b.xi.cross(a.u)};
}

Se3Group se3_exp(const Se3Algebra& a) {
  const double theta2 = a.xi.squaredNorm();
  const double theta = std::sqrt(theta2);
  double k;  // (1 - cos(theta))/theta^2
  double m;  // (theta - sin(theta))/theta^3
  if (theta < 1e-4) {
    k = 0.5 - theta2 / 24.0 * (1.0 - theta2 / 30.0 * (1.0 - theta2 / 56.0));
    m = 1.0 / 6.0 - theta2 / 120.0 * (1.0 - theta2 / 42.0 * (1.0 - theta2 / 72.0));
  } else {
    const double half = std::sin(0.5 * theta);
    k = 2.0 * half * half / theta2;
    m = (theta - std::sin(theta)) / (theta2 * theta);
  }
  const Eigen::Matrix3d w = hat(a.xi);
  const Eigen::Matrix3d v = Eigen::Matrix3d::Identity() + k * w + m * (w * w);
  return {so3_exp(a.xi), v * a.u};
}

CoadjointPoint coadjoint_act(const Se3Group& ge, const CoadjointPoint& p) {
  const Eigen::Matrix3d gt = ge.g.transpose();
  return {gt * (p.mu - ge.u.cross(p.beta)), gt * p.beta};
}

CoadjointPoint coadjoint_infinitesimal(const Se3Algebra& a, const CoadjointPoint& p) {
  return {-a.xi.cross(p.mu) - a.u.cross(p.beta), -a.xi.cross(p.beta)};
}

double CoadjointAction::ambient_distance(const Point& p, const Point& q) const {
  return std::sqrt((p.mu - q.mu).squaredNorm() + (p.beta - q.beta).squaredNorm());
}

double CoadjointAction::ambient_norm(const Point& p) const {
  return std::sqrt(p.mu.squaredNorm() + p.beta.squaredNorm());
}

}  // namespace cfree
