#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "pstrack/newton.hpp"
#include "pstrack/pade.hpp"
#include "pstrack/stepsize.hpp"
#include "pstrack/tracker/corrector.hpp"

namespace pstrack {

template <xprec::working_real R>
struct tracker_config {
  std::size_t degree = 8;
  std::optional<pade_degrees> pade;  ///< default floor(d/2), floor(d/2)
  step_policy<R> policy;
  R corrector_tol{0.0};  ///< zero selects eps^(3/4)
  std::size_t corrector_max_iters = 8;
  std::size_t newton_max_iters = 8;
  std::size_t max_retries = 3;
  std::size_t max_steps = 10000;
  std::size_t threads = 1;
  R t_target{1.0};
  R end_tolerance{0.0};  ///< stop when t_target - t <= this; zero selects min_step

  pade_degrees pade_or_default() const { return pade ? *pade : default_pade_degrees(degree); }
  R corrector_tolerance() const { return corrector_tol > R(0.0) ? corrector_tol : default_corrector_tolerance<R>(); }
  R end_tolerance_or_default() const { return end_tolerance > R(0.0) ? end_tolerance : policy.min_step; }

  void validate() const {
    const auto pd = pade_or_default();
    if (degree < 1) throw domain_error("degree must be at least 1");
    if (pd.numerator + pd.denominator > degree) throw domain_error("K + L must not exceed the degree");
    if (threads == 0) throw domain_error("thread count must be at least 1");
    if (corrector_max_iters == 0 || newton_max_iters == 0 || max_steps == 0)
      throw domain_error("iteration limits must be positive");
    if (corrector_tol < R(0.0) || end_tolerance < R(0.0)) throw domain_error("tolerances must be positive");
    if (!(policy.beta > R(0.0)) || !(policy.min_step > R(0.0))) throw domain_error("beta and min_step must be positive");
    if (!(t_target > R(0.0))) throw domain_error("target must be positive");
  }
};

/// Wall-clock seconds per stage, summed over the steps.
struct stage_times {
  double newton = 0;     ///< series Newton
  double curvature = 0;  ///< Hessians and SVDs for C
  double radius = 0;     ///< Fabry ratio for R
  double pade = 0;       ///< construction and evaluation
  double shift = 0;      ///< homotopy coefficient shift
  double corrector = 0;

  double total() const noexcept { return newton + curvature + radius + pade + shift + corrector; }
};

template <xprec::working_real R>
struct step_record {
  std::size_t index = 0;
  R t_start{0.0};
  step_decision<R> decision;  ///< as proposed by C, R and the target
  R delta_t{0.0};             ///< step taken, after any halving
  std::size_t retries = 0;
  std::size_t corrector_iterations = 0;
  R corrector_residual{0.0};
  std::size_t newton_iterations = 0;
  std::optional<R> newton_condition;
  std::size_t pade_reductions = 0;
};

template <xprec::working_real R>
struct tracker_state {
  sparse_system<R> hom;  ///< shifted so that the current position is t = 0
  R t_global{0.0};
  cvector<R> x_point;
  std::vector<truncated_series<R>> x_series;
  std::vector<step_record<R>> log;
  stage_times times;
};

enum class tracking_failure { step_failure, corrector_failure, singular_jacobian };

constexpr const char* to_string(tracking_failure k) noexcept {
  switch (k) {
    case tracking_failure::step_failure:
      return "step-failure";
    case tracking_failure::corrector_failure:
      return "corrector-failure";
    case tracking_failure::singular_jacobian:
      return "singular-jacobian";
  }
  return "?";
}

template <xprec::working_real R>
class tracking_error : public error {
 public:
  tracking_error(tracking_failure kind, const std::string& what, tracker_state<R> state)
      : error(std::string(to_string(kind)) + ": " + what), kind_(kind), state_(std::move(state)) {}
  tracking_failure kind() const noexcept { return kind_; }
  const tracker_state<R>& state() const noexcept { return state_; }
  const std::vector<step_record<R>>& log() const noexcept { return state_.log; }

 private:
  tracking_failure kind_;
  tracker_state<R> state_;
};

namespace detail {

class stopwatch {
 public:
  explicit stopwatch(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~stopwatch() { sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }
  stopwatch(const stopwatch&) = delete;
  stopwatch& operator=(const stopwatch&) = delete;

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

/// C at the point: SVD of the Jacobian and of every Hessian, one job each.
template <xprec::working_real R>
R curvature_at(const sparse_system<R>& hom, const cvector<R>& x, work_crew& crew) {
  const auto h = hessian_point(hom, x, crew);
  const std::size_t n = hom.variables();
  matrix<R> jac(h.size(), n);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) jac(i, j) = h[i].gradient[j];
  std::vector<svd_result<R>> svds(h.size() + 1);
  crew.for_each(svds.size(), [&](std::size_t k, std::size_t) {
    svds[k] = k == 0 ? svd(jac) : svd(h[k - 1].hessian);
  });
  return curvature_bound(svds.front(), std::span<const svd_result<R>>(svds).subspan(1));
}

}  // namespace detail

/// Tracks the solution path of hom from the root x0 at t = 0 to
/// cfg.t_target. Each step computes the series x(t) by Newton, the bounds C
/// and R, the step delta_t, predicts with Pade approximants, shifts the
/// homotopy to t = delta_t and corrects with point Newton. A failed
/// correction halves delta_t and retries with the same approximants.
template <xprec::working_real R>
tracker_state<R> track_path(const sparse_system<R>& hom, std::span<const xprec::xcomplex<R>> x0,
                            const tracker_config<R>& cfg) {
  cfg.validate();
  if (!hom.is_square()) throw dimension_error("tracking needs a square system");
  if (x0.size() != hom.variables()) throw dimension_error("start point has the wrong length");
  work_crew crew(cfg.threads);
  tracker_state<R> st{with_degree(hom, cfg.degree), R(0.0), cvector<R>(x0.begin(), x0.end()), {}, {}, {}};
  const R tol = cfg.corrector_tolerance();
  const R end_tol = cfg.end_tolerance_or_default();
  const auto degrees = cfg.pade_or_default();
  newton_config<R> ncfg;
  ncfg.degree = cfg.degree;
  ncfg.max_iters = cfg.newton_max_iters;
  ncfg.compute_residual = false;

  auto fail = [&](tracking_failure kind, const std::string& what) { return tracking_error<R>(kind, what, st); };

  while (cfg.t_target - st.t_global > end_tol) {
    if (st.log.size() >= cfg.max_steps) throw fail(tracking_failure::step_failure, "step limit reached");
    step_record<R> rec;
    rec.index = st.log.size();
    rec.t_start = st.t_global;
    try {
      {
        detail::stopwatch sw(st.times.newton);
        auto nr = newton_series(st.hom, std::span<const xprec::xcomplex<R>>(st.x_point), ncfg, crew);
        st.x_series = std::move(nr.x);
        rec.newton_iterations = nr.report.iterations;
        rec.newton_condition = nr.report.condition;
      }
      R c;
      {
        detail::stopwatch sw(st.times.curvature);
        c = detail::curvature_at(st.hom, st.x_point, crew);
      }
      fabry_estimate<R> r;
      {
        detail::stopwatch sw(st.times.radius);
        r = vector_fabry(std::span<const truncated_series<R>>(st.x_series));
      }
      rec.decision = decide_step(c, r, st.t_global, cfg.t_target, cfg.policy);
    } catch (const singular_matrix& e) {
      throw fail(tracking_failure::singular_jacobian, e.what());
    } catch (const newton_divergence<R>& e) {
      throw fail(tracking_failure::step_failure, e.what());
    } catch (const step_failure<R>& e) {
      rec.decision = e.decision();
      st.log.push_back(rec);
      throw fail(tracking_failure::step_failure, e.what());
    }

    pade_vector_result<R> approx;
    {
      detail::stopwatch sw(st.times.pade);
      approx = pade_vector(std::span<const truncated_series<R>>(st.x_series), degrees, crew);
    }
    rec.pade_reductions = approx.issues.size();

    R dt = rec.decision.delta_t;
    std::string last_failure;
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt > cfg.max_retries) {
        st.log.push_back(rec);
        throw fail(tracking_failure::corrector_failure, last_failure);
      }
      if (attempt > 0 && dt < cfg.policy.min_step) {
        st.log.push_back(rec);
        throw fail(tracking_failure::step_failure, "halved step fell below the minimum step");
      }
      rec.retries = attempt;
      try {
        cvector<R> predicted;
        {
          detail::stopwatch sw(st.times.pade);
          predicted = pade_evaluate(std::span<const pade_approximant<R>>(approx.approximants), xprec::xcomplex<R>(dt));
        }
        sparse_system<R> shifted = [&] {
          detail::stopwatch sw(st.times.shift);
          return shift_homotopy(st.hom, xprec::xcomplex<R>(dt), crew);
        }();
        corrector_result<R> corr;
        {
          detail::stopwatch sw(st.times.corrector);
          corr = corrector(shifted, predicted, tol, cfg.corrector_max_iters, crew);
        }
        rec.delta_t = dt;
        rec.corrector_iterations = corr.iterations;
        rec.corrector_residual = corr.residual;
        st.hom = std::move(shifted);
        st.x_point = std::move(corr.x);
        break;
      } catch (const pade_pole& e) {
        last_failure = e.what();
      } catch (const corrector_failure& e) {
        last_failure = e.what();
      } catch (const singular_matrix& e) {
        last_failure = e.what();
      }
      dt = dt * R(0.5);
    }
    st.t_global = st.t_global + rec.delta_t;
    const bool reached = rec.retries == 0 && rec.decision.binding == step_binding::target;
    st.log.push_back(rec);
    if (reached) break;
  }
  return st;
}

template <xprec::working_real R>
tracker_state<R> track_path(const sparse_system<R>& hom, const std::vector<xprec::xcomplex<R>>& x0,
                            const tracker_config<R>& cfg) {
  return track_path(hom, std::span<const xprec::xcomplex<R>>(x0), cfg);
}

}  // namespace pstrack
