#pragma once

#include <span>
#include <string_view>

#include "pstrack/linalg/svd.hpp"
#include "pstrack/series/truncated_series.hpp"

namespace pstrack {

/// Which bound fixed the step.
enum class step_binding { curvature, radius, target, floor };

constexpr std::string_view to_string(step_binding b) noexcept {
  switch (b) {
    case step_binding::curvature:
      return "curvature";
    case step_binding::radius:
      return "radius";
    case step_binding::target:
      return "target";
    case step_binding::floor:
      return "floor";
  }
  return "?";
}

template <xprec::working_real R>
struct step_policy {
  R beta{0.5};
  R min_step{xprec::real_traits<R>::default_min_step};
};

template <xprec::working_real R>
struct step_decision {
  R curvature{0.0};       ///< C
  R radius{0.0};          ///< R
  xprec::xcomplex<R> z;   ///< nearest-singularity estimate
  std::size_t radius_component = 0;
  R delta_t{0.0};
  step_binding binding = step_binding::target;
};

/// The step that beta min(C, R) allows is below the minimum step.
template <xprec::working_real R>
class step_failure : public error {
 public:
  explicit step_failure(step_decision<R> d)
      : error("step size " + std::to_string(xprec::to_double(d.delta_t)) + " fell below the minimum step"),
        decision_(d) {}
  const step_decision<R>& decision() const noexcept { return decision_; }

 private:
  step_decision<R> decision_;
};

/// C = 2 sigma_n(J) / sqrt(sum_k sigma_{k,1}^2) from the Jacobian SVD and the
/// SVDs of the polynomial Hessians; +inf when every Hessian is zero.
template <xprec::working_real R>
R curvature_bound(const svd_result<R>& jacobian, std::span<const svd_result<R>> hessians) {
  using std::sqrt;
  if (jacobian.singular_values.empty()) throw dimension_error("empty Jacobian SVD");
  R sum(0.0);
  for (const auto& h : hessians) {
    if (h.singular_values.empty()) throw dimension_error("empty Hessian SVD");
    sum += h.largest() * h.largest();
  }
  if (sum == R(0.0)) return xprec::infinity<R>();
  return R(2.0) * jacobian.smallest() / sqrt(sum);
}

template <xprec::working_real R>
R curvature_bound(const svd_result<R>& jacobian, const std::vector<svd_result<R>>& hessians) {
  return curvature_bound(jacobian, std::span<const svd_result<R>>(hessians));
}

/// delta_t = min(beta min(C, R), t_target - t_current). A step set by C or R
/// that falls below min_step raises step_failure (binding = floor).
template <xprec::working_real R>
step_decision<R> decide_step(const R& curvature, const fabry_estimate<R>& radius, const R& t_current,
                             const R& t_target, const step_policy<R>& policy) {
  if (!(curvature >= R(0.0)) || !(radius.radius >= R(0.0))) throw domain_error("step bounds must be non-negative");
  if (!(t_current < t_target)) throw domain_error("current parameter must be below the target");
  if (!(policy.beta > R(0.0)) || !(policy.min_step > R(0.0))) throw domain_error("beta and min_step must be positive");
  step_decision<R> d;
  d.curvature = curvature;
  d.radius = radius.radius;
  d.z = radius.z;
  d.radius_component = radius.component;
  const R remaining = t_target - t_current;
  const bool radius_binds = radius.radius < curvature;
  const R bound = radius_binds ? radius.radius : curvature;
  if (xprec::is_inf(bound) || policy.beta * bound >= remaining) {
    d.delta_t = remaining;
    d.binding = step_binding::target;
    return d;
  }
  d.delta_t = policy.beta * bound;
  d.binding = radius_binds ? step_binding::radius : step_binding::curvature;
  if (d.delta_t < policy.min_step) {
    d.binding = step_binding::floor;
    throw step_failure<R>(d);
  }
  return d;
}

}  // namespace pstrack
