#include "cfree/problems.hpp"

#include <cmath>
#include <random>

#include "cfree/errors.hpp"

namespace cfree {

Problem<SphereAction> rigid_body(const RigidBodyParams& params) {
  if (!(params.inertia.minCoeff() > 0.0)) throw DomainError("rigid_body: inertia must be positive");
  if (!(params.mass > 0.0)) throw DomainError("rigid_body: mass must be positive");
  const Eigen::Vector3d inv_inertia = params.inertia.cwiseInverse();
  const double m = params.mass;

  Problem<SphereAction> p;
  p.name = "rigid-body";
  p.f = [inv_inertia, m](const Eigen::Vector3d& xi) -> Eigen::Vector3d {
    return -m * inv_inertia.cwiseProduct(xi);
  };
  p.relative_tolerance = false;
  p.invariants = [](const Eigen::Vector3d& xi) {
    return std::map<std::string, double>{{"norm2", xi.squaredNorm()}};
  };
  p.parameters = {{"I1", params.inertia(0)}, {"I2", params.inertia(1)},
                  {"I3", params.inertia(2)}, {"m", m}};
  return p;
}

Eigen::Vector3d random_unit_vector(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (;;) {
    const Eigen::Vector3d v(uni(gen), uni(gen), uni(gen));
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

Problem<PlaneLinearAction> van_der_pol(const VdpParams& params) {
  const double mu = params.mu;
  Problem<PlaneLinearAction> p;
  p.name = "van-der-pol";
  p.f = [mu](const Eigen::Vector2d& y) -> Eigen::Matrix2d {
    if (y(0) == 0.0 && y(1) == 0.0) {
      throw DomainError("van_der_pol: state (0, 0) is outside R^2 \\ {0}");
    }
    Eigen::Matrix2d a;
    a << 0.0, 1.0, -1.0, mu * (1.0 - y(0) * y(0));
    return a;
  };
  p.relative_tolerance = true;
  p.invariants = [](const Eigen::Vector2d&) { return std::map<std::string, double>{}; };
  p.parameters = {{"mu", mu}};
  p.reference = {ReferenceSpec::AdaptiveCf43, 1e-12, 1e-3, 0.0};
  return p;
}

Problem<CoadjointAction> heavy_top(const HeavyTopParams& params) {
  if (!(params.inertia.minCoeff() > 0.0)) throw DomainError("heavy_top: inertia must be positive");
  if (std::abs(params.chi.norm() - 1.0) > 1e-12) throw DomainError("heavy_top: chi must be a unit vector");
  const Eigen::Vector3d inv_inertia = params.inertia.cwiseInverse();
  const Eigen::Vector3d gravity_arm = params.mass * params.gravity * params.chi;

  Problem<CoadjointAction> p;
  p.name = "heavy-top";
  p.f = [inv_inertia, gravity_arm](const CoadjointPoint& y) -> Se3Algebra {
    return {inv_inertia.cwiseProduct(y.mu), gravity_arm};
  };
  p.relative_tolerance = false;
  p.invariants = [](const CoadjointPoint& y) {
    return std::map<std::string, double>{{"beta2", y.beta.squaredNorm()}, {"mubeta", y.mu.dot(y.beta)}};
  };
  p.parameters = {{"I1", params.inertia(0)}, {"I2", params.inertia(1)}, {"I3", params.inertia(2)},
                  {"m", params.mass}, {"g", params.gravity}, {"chi1", params.chi(0)},
                  {"chi2", params.chi(1)}, {"chi3", params.chi(2)}};
  return p;
}

}  // namespace cfree
