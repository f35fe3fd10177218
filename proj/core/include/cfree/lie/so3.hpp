#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cfree {

/// Skew matrix with hat(v) * w == v.cross(w).
Eigen::Matrix3d hat(const Eigen::Vector3d& v);

/// Inverse of hat. Throws DomainError if `m` is not antisymmetric within 1e-12.
Eigen::Vector3d vee(const Eigen::Matrix3d& m);

/// exp(hat(v)) by the Rodrigues formula; Taylor coefficients below |v| = 1e-4.
Eigen::Matrix3d so3_exp(const Eigen::Vector3d& v);

/// SO(3) acting on R^3 (and hence on every sphere) by matrix multiplication.
/// The algebra is so(3) stored as the hat-vector.
struct SphereAction {
  using Algebra = Eigen::Vector3d;
  using Group = Eigen::Matrix3d;
  using Point = Eigen::Vector3d;

  Algebra algebra_zero() const { return Algebra::Zero(); }
  Algebra algebra_axpy(double s, const Algebra& x, const Algebra& y) const { return s * x + y; }
  Group exp(const Algebra& u) const { return so3_exp(u); }
  Point act(const Group& g, const Point& p) const { return g * p; }
  Point infinitesimal(const Algebra& u, const Point& p) const { return u.cross(p); }
  double ambient_distance(const Point& p, const Point& q) const { return (p - q).norm(); }
  double ambient_norm(const Point& p) const { return p.norm(); }
  bool is_finite(const Point& p) const { return p.allFinite(); }
};

}  // namespace cfree
