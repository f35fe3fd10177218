#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include <Eigen/Core>

#include "cfree/lie/action.hpp"
#include "cfree/lie/gl2.hpp"
#include "cfree/lie/se3.hpp"
#include "cfree/lie/so3.hpp"

namespace cfree {

/// How a strict reference solution of a problem is computed.
struct ReferenceSpec {
  enum Kind { AdaptiveCf43, FixedCf4 };
  Kind kind = FixedCf4;
  double tol = 1e-12;            ///< atol = rtol for AdaptiveCf43
  double hmax = 1e-3;            ///< AdaptiveCf43 step bound
  double steps_per_unit = 8192;  ///< FixedCf4 step density
};

/// An ODE y' = (lambda_* f(y))(y) posed through a homogeneous-space action.
template <HomogeneousAction Action>
struct Problem {
  using Point = typename Action::Point;
  using Algebra = typename Action::Algebra;

  std::string name;
  Action action;
  std::function<Algebra(const Point&)> f;
  /// Relative tolerances are meaningful only where the state lives in a
  /// vector space; otherwise the controller forces rtol = 0.
  bool relative_tolerance = false;
  std::function<std::map<std::string, double>(const Point&)> invariants;
  std::map<std::string, double> parameters;
  ReferenceSpec reference;

  /// The induced vector field lambda_*(f(y))(y).
  Point vector_field(const Point& y) const { return action.infinitesimal(f(y), y); }
};

/// Named conserved quantities of `problem` at `point` (empty if none).
template <HomogeneousAction Action>
std::map<std::string, double> conserved(const Problem<Action>& problem,
                                        const typename Action::Point& point) {
  if (!problem.invariants) return {};
  return problem.invariants(point);
}

struct RigidBodyParams {
  Eigen::Vector3d inertia{1.0, 2.0, 5.0};
  double mass = 1.0;
};

/// Free rigid body on S^2: f(xi) = -m * I^-1 xi as an so(3) hat-vector, so
/// that xi' = m * xi x I^-1 xi. Invariant: norm2 = |xi|^2.
Problem<SphereAction> rigid_body(const RigidBodyParams& params = {});

/// Unit vector drawn uniformly on S^2 from a seeded generator.
Eigen::Vector3d random_unit_vector(std::uint64_t seed);

struct VdpParams {
  double mu = 60.0;
};

/// Van der Pol x'' - mu(1 - x^2)x' + x = 0 as y' = A(y) y with
/// A(y) = [[0, 1], [-1, mu(1 - y1^2)]]. f throws DomainError at y = 0.
Problem<PlaneLinearAction> van_der_pol(const VdpParams& params = {});

/// Initial state used in the Van der Pol experiments.
inline Eigen::Vector2d van_der_pol_initial() { return {1.0, 1.0}; }

struct HeavyTopParams {
  Eigen::Vector3d inertia{2.0, 2.0, 1.0};
  double mass = 1.0;
  double gravity = 1.0;
  Eigen::Vector3d chi{1.0, 0.0, 0.0};
};

/// Heavy top on se(3)* under the coadjoint action: f(mu, beta) =
/// (I^-1 mu, m g chi). Invariants: beta2 = |beta|^2, mubeta = mu . beta.
/// The defaults describe a Kovalevskaya top (inertia 2:2:1, centre of mass
/// in the equatorial plane).
Problem<CoadjointAction> heavy_top(const HeavyTopParams& params = {});

/// Default heavy-top initial state: mu = (0.1, 0.2, 0.3), beta = e3.
inline CoadjointPoint heavy_top_initial() {
  return {Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector3d(0.0, 0.0, 1.0)};
}

}  // namespace cfree
