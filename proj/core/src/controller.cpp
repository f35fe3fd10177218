#include "cfree/controller.hpp"

namespace cfree {

void ControllerConfig::validate() const {
  if (!(fac > 0.0 && fac < 1.0)) throw DomainError("controller: fac must lie in (0, 1)");
  if (!(facmin > 0.0 && facmin < 1.0)) throw DomainError("controller: facmin must lie in (0, 1)");
  if (!(facmax > 1.0)) throw DomainError("controller: facmax must exceed 1");
  if (!(atol > 0.0)) throw DomainError("controller: atol must be positive");
  if (!(rtol >= 0.0)) throw DomainError("controller: rtol must be nonnegative");
  if (!(hmin >= 0.0 && hmin < hmax)) throw DomainError("controller: need 0 <= hmin < hmax");
  if (h0 && !(*h0 > 0.0)) throw DomainError("controller: h0 must be positive");
  if (max_consecutive_rejects < 1) throw DomainError("controller: max_consecutive_rejects must be positive");
}

double next_step_size(double h, double err, int p, const ControllerConfig& cfg, bool after_reject) {
  const double e = err > 0.0 ? err : std::numeric_limits<double>::epsilon();
  const double growth = after_reject ? 1.0 : cfg.facmax;
  const double factor = std::min(growth, std::max(cfg.facmin, cfg.fac * std::pow(e, -1.0 / p)));
  return std::clamp(h * factor, cfg.hmin, cfg.hmax);
}

StepController::Decision StepController::decide(double h, double err) {
  Decision d;
  d.accepted = err <= 1.0;
  // The step that follows a rejection may not grow.
  const double e = std::isfinite(err) ? err : std::numeric_limits<double>::max();
  d.h_next = next_step_size(h, e, order_, cfg_, after_reject());
  if (d.accepted) {
    consecutive_rejects_ = 0;
  } else if (++consecutive_rejects_ >= cfg_.max_consecutive_rejects) {
    throw NumericalError("controller: " + std::to_string(consecutive_rejects_) +
                         " consecutive rejections at h = " + std::to_string(h));
  }
  return d;
}

}  // namespace cfree
