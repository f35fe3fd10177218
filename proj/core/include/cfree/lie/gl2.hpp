#pragma once

#include <Eigen/Core>

namespace cfree {

/// Exact exponential of a real 2x2 matrix.
///
/// Writing A = mu*I + B with mu = tr(A)/2, the traceless part satisfies
/// B^2 = q*I with q = -det(B), so exp(A) = e^mu (C(q) I + S(q) B) where
/// C, S are cosh/sinh-type (q > 0) or cos/sin-type (q < 0) functions of
/// sqrt(|q|). Within |q| < 1e-6 the even/odd power series are used.
Eigen::Matrix2d gl2_exp(const Eigen::Matrix2d& a);

/// GL(2) acting on R^2 \ {0} by matrix-vector multiplication.
struct PlaneLinearAction {
  using Algebra = Eigen::Matrix2d;
  using Group = Eigen::Matrix2d;
  using Point = Eigen::Vector2d;

  Algebra algebra_zero() const { return Algebra::Zero(); }
  Algebra algebra_axpy(double s, const Algebra& x, const Algebra& y) const { return s * x + y; }
  Group exp(const Algebra& u) const { return gl2_exp(u); }
  Point act(const Group& g, const Point& p) const { return g * p; }
  Point infinitesimal(const Algebra& u, const Point& p) const { return u * p; }
  double ambient_distance(const Point& p, const Point& q) const { return (p - q).norm(); }
  double ambient_norm(const Point& p) const { return p.norm(); }
  bool is_finite(const Point& p) const { return p.allFinite(); }
};

}  // namespace cfree
