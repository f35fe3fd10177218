#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cfree/catalog.hpp"
#include "cfree/controller.hpp"
#include "cfree/problems.hpp"

namespace cfree {

inline std::vector<double> coords(const Eigen::Vector3d& p) { return {p(0), p(1), p(2)}; }
inline std::vector<double> coords(const Eigen::Vector2d& p) { return {p(0), p(1)}; }
inline std::vector<double> coords(const CoadjointPoint& p) {
  return {p.mu(0), p.mu(1), p.mu(2), p.beta(0), p.beta(1), p.beta(2)};
}

template <class Point>
struct PointTag {};

inline Eigen::Vector3d from_coords(const std::vector<double>& c, PointTag<Eigen::Vector3d>) {
  return {c.at(0), c.at(1), c.at(2)};
}
inline Eigen::Vector2d from_coords(const std::vector<double>& c, PointTag<Eigen::Vector2d>) {
  return {c.at(0), c.at(1)};
}
inline CoadjointPoint from_coords(const std::vector<double>& c, PointTag<CoadjointPoint>) {
  return {Eigen::Vector3d(c.at(0), c.at(1), c.at(2)), Eigen::Vector3d(c.at(3), c.at(4), c.at(5))};
}

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string content_hash(const std::string& text);

/// Directory for cached reference solutions: $CFREE_CACHE_DIR if set, else a
/// subdirectory of the system temp directory. The value "off" disables it.
std::optional<std::filesystem::path> reference_cache_dir();

/// Cache lookup and store; failures to read or write are silent misses.
std::optional<std::vector<double>> read_reference_cache(const std::filesystem::path& dir,
                                                        const std::string& key);
void write_reference_cache(const std::filesystem::path& dir, const std::string& key,
                           const std::vector<double>& values);

/// Canonical text describing a reference computation, hashed for the cache.
std::string reference_key(const std::string& problem, const std::map<std::string, double>& params,
                           const std::vector<double>& y0, double t0, double t1,
                           const ReferenceSpec& spec);

/// Strict-tolerance solution at t1 following problem.reference. Results are
/// cached on disk keyed by (problem, parameters, initial state, span).
template <HomogeneousAction Action>
typename Action::Point reference_solution(const Problem<Action>& problem,
                                          const typename Action::Point& y0, double t0, double t1,
                                          std::optional<std::filesystem::path> cache_dir = reference_cache_dir()) {
  using Point = typename Action::Point;
  const ReferenceSpec& spec = problem.reference;
  const std::string key = reference_key(problem.name, problem.parameters, coords(y0), t0, t1, spec);
  if (cache_dir) {
    if (auto hit = read_reference_cache(*cache_dir, key)) return from_coords(*hit, PointTag<Point>{});
  }
  Point result;
  if (spec.kind == ReferenceSpec::AdaptiveCf43) {
    ControllerConfig cfg;
    cfg.atol = spec.tol;
    cfg.rtol = spec.tol;
    cfg.hmax = spec.hmax;
    cfg.h0 = std::min(spec.hmax, (t1 - t0) / 10.0) * 1e-3;
    cfg.max_consecutive_rejects = 50;
    result = integrate_adaptive(find_tableau("cf43"), problem, y0, t0, t1, cfg).back();
  } else {
    const long n = std::max(16L, static_cast<long>(std::ceil(spec.steps_per_unit * (t1 - t0))));
    FixedOptions opts;
    opts.record_points = false;
    result = integrate_fixed(find_tableau("cf4"), problem, y0, t0, t1, n, opts).back();
  }
  if (cache_dir) write_reference_cache(*cache_dir, key, coords(result));
  return result;
}

}  // namespace cfree
