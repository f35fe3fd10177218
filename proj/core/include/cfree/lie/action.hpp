#pragma once

#include <concepts>

namespace cfree {

/// A Lie group acting on a manifold embedded in a Euclidean space.
///
/// Algebra elements combine linearly (`algebra_axpy(s, x, y)` is s*x + y),
/// `exp` maps them to group elements, and `act` moves points. Tangent
/// vectors from `infinitesimal` share the ambient representation of Point,
/// so `ambient_norm` applies to them as well.
template <class A>
concept HomogeneousAction =
    requires(const A& action, const typename A::Algebra& u, const typename A::Group& g,
             const typename A::Point& p, double s) {
      { action.algebra_zero() } -> std::convertible_to<typename A::Algebra>;
      { action.algebra_axpy(s, u, u) } -> std::convertible_to<typename A::Algebra>;
      { action.exp(u) } -> std::convertible_to<typename A::Group>;
      { action.act(g, p) } -> std::convertible_to<typename A::Point>;
      { action.infinitesimal(u, p) } -> std::convertible_to<typename A::Point>;
      { action.ambient_distance(p, p) } -> std::convertible_to<double>;
      { action.ambient_norm(p) } -> std::convertible_to<double>;
      { action.is_finite(p) } -> std::convertible_to<bool>;
    };

}  // namespace cfree
