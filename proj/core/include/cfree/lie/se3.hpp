#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cfree {

/// Element (xi, u) of se(3): rotational rate xi and translational part u.
struct Se3Algebra {
  Eigen::Vector3d xi = Eigen::Vector3d::Zero();
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
};

/// Element (g, u) of SE(3) = SO(3) x| R^3.
struct Se3Group {
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
  Eigen::Vector3d u = Eigen::Vector3d::Zero();

  static Se3Group identity() { return {}; }
};

/// (g,u).(h,v) = (g h, g v + u)
Se3Group operator*(const Se3Group& a, const Se3Group& b);

/// (g,u)^-1 = (g^T, -g^T u)
Se3Group inverse(const Se3Group& a);

/// [(xi,u),(eta,v)] = (xi x eta, xi x v - eta x u)
Se3Algebra bracket(const Se3Algebra& a, const Se3Algebra& b);

/// exp(xi, u) = (exp(hat xi), V u), V = sum_m hat(xi)^m / (m+1)!.
Se3Group se3_exp(const Se3Algebra& a);

/// Point (mu, beta) of se(3)*.
struct CoadjointPoint {
  Eigen::Vector3d mu = Eigen::Vector3d::Zero();
  Eigen::Vector3d beta = Eigen::Vector3d::Zero();
};

/// Ad*_{(g,u)}(mu, beta) = (g^T (mu - u x beta), g^T beta).
///
/// This is a right action: act(a*b, m) == act(b, act(a, m)).
CoadjointPoint coadjoint_act(const Se3Group& ge, const CoadjointPoint& m);

/// ad*_{(xi,u)}(mu, beta) = (-xi x mu - u x beta, -xi x beta).
CoadjointPoint coadjoint_infinitesimal(const Se3Algebra& a, const CoadjointPoint& m);

/// SE(3) acting on se(3)* by the coadjoint action.
struct CoadjointAction {
  using Algebra = Se3Algebra;
  using Group = Se3Group;
  using Point = CoadjointPoint;

  Algebra algebra_zero() const { return {}; }
  Algebra algebra_axpy(double s, const Algebra& x, const Algebra& y) const {
    return {s * x.xi + y.xi, s * x.u + y.u};
  }
  Group exp(const Algebra& a) const { return se3_exp(a); }
  Point act(const Group& g, const Point& p) const { return coadjoint_act(g, p); }
  Point infinitesimal(const Algebra& a, const Point& p) const { return coadjoint_infinitesimal(a, p); }
  double ambient_distance(const Point& p, const Point& q) const;
  double ambient_norm(const Point& p) const;
  bool is_finite(const Point& p) const { return p.mu.allFinite() && p.beta.allFinite(); }
};

}  // namespace cfree
