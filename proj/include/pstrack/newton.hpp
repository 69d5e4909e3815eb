#pragma once

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pstrack/blocksolve/solver.hpp"
#include "pstrack/evaldiff/series_eval.hpp"
#include "pstrack/linalg/svd.hpp"

namespace pstrack {

template <xprec::working_real R>
struct newton_config {
  std::size_t degree = 8;
  std::size_t max_iters = 8;
  /// Stop once every coefficient of an update is below this times
  /// max(1, max |x_k|). Zero selects sqrt(eps).
  R tol_coeff{0.0};
  bool estimate_condition = true;
  bool compute_residual = true;

  R tolerance() const {
    using std::sqrt;
    return tol_coeff > R(0.0) ? tol_coeff : sqrt(R(xprec::real_traits<R>::epsilon));
  }
};

enum class newton_stop { converged, max_iterations };

template <xprec::working_real R>
struct newton_report {
  std::size_t iterations = 0;
  std::vector<R> update_norms;  ///< max modulus over all coefficients of each update
  std::optional<R> residual;    ///< max modulus over the coefficients of H(x(t), t)
  std::optional<R> condition;   ///< cond(A_0) at the first iteration
  newton_stop stop = newton_stop::max_iterations;
};

template <xprec::working_real R>
struct newton_result {
  std::vector<truncated_series<R>> x;
  newton_report<R> report;
};

/// Update norms grew twice in a row after the expected convergence phase.
template <xprec::working_real R>
class newton_divergence : public error {
 public:
  explicit newton_divergence(newton_result<R> best)
      : error("Newton on series diverged"), best_(std::move(best)) {}
  const newton_result<R>& best() const noexcept { return best_; }

 private:
  newton_result<R> best_;
};

namespace detail {

template <xprec::working_real R>
R max_coefficient(std::span<const truncated_series<R>> s) {
  R m(0.0);
  for (const auto& si : s) {
    const R a = max_abs(si);
    if (a > m) m = a;
  }
  return m;
}

/// Iterations after which the number of correct coefficients has reached
/// d + 1 under quadratic convergence.
inline std::size_t doubling_iterations(std::size_t d) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < d + 1) ++k;
  return k;
}

}  // namespace detail

/// Power series x(t) with H(x(t), t) = O(t^{d+1}) from a root x0 of H(x, 0).
/// Each iteration evaluates H and its Jacobian at the current series,
/// solves the block Toeplitz system for the update with the pipelined
/// schedule and adds it.
template <xprec::working_real R>
newton_result<R> newton_series(const sparse_system<R>& hom, std::span<const xprec::xcomplex<R>> x0,
                               const newton_config<R>& cfg, work_crew& crew) {
  if (cfg.max_iters == 0) throw domain_error("Newton needs max_iters >= 1");
  if (cfg.tol_coeff < R(0.0) || !xprec::is_finite(cfg.tol_coeff)) throw domain_error("Newton needs a positive tolerance");
  if (!hom.is_square()) throw dimension_error("Newton needs a square system");
  if (x0.size() != hom.variables()) throw dimension_error("start point has the wrong length");
  const std::size_t n = hom.variables();
  const std::size_t d = cfg.degree;
  const sparse_system<R> h = hom.degree() == d ? hom : with_degree(hom, d);
  const R tol = cfg.tolerance();

  newton_result<R> cur;
  for (const auto& c : x0) cur.x.push_back(truncated_series<R>::constant(c, d));
  std::optional<newton_result<R>> best;
  R best_norm = xprec::infinity<R>();
  std::size_t growth = 0;

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const auto ev = eval_diff_system(h, cur.x, crew);
    block_toeplitz_system<R> sys;
    for (std::size_t k = 0; k <= d; ++k) {
      matrix<R> a(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = ev.jac(i, j)[k];
      sys.blocks.push_back(std::move(a));
      cvector<R> b(n);
      for (std::size_t i = 0; i < n; ++i) b[i] = -ev.values[i][k];
      sys.rhs.push_back(std::move(b));
    }
    if (it == 0 && cfg.estimate_condition) cur.report.condition = condition(sys.blocks[0]);
    const auto dx = solve_pipelined(sys, crew);
    R norm(0.0);
    for (std::size_t k = 0; k <= d; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        cur.x[i][k] += dx[k][i];
        const R a = abs(dx[k][i]);
        if (a > norm) norm = a;
      }
    cur.report.update_norms.push_back(norm);
    cur.report.iterations = it + 1;

    if (norm < tol * std::max(R(1.0), detail::max_coefficient<R>(cur.x))) {
      cur.report.stop = newton_stop::converged;
      break;
    }
    const auto& norms = cur.report.update_norms;
    if (norms.size() >= 2 && norms[norms.size() - 1] > norms[norms.size() - 2])
      ++growth;
    else
      growth = 0;
    if (norm < best_norm) {
      best_norm = norm;
      best = cur;
    }
    if (growth >= 2 && cur.report.iterations > detail::doubling_iterations(d))
      throw newton_divergence<R>(best ? std::move(*best) : std::move(cur));
  }

  if (cfg.compute_residual) {
    const auto ev = eval_diff_system(h, cur.x, crew);
    cur.report.residual = detail::max_coefficient<R>(ev.values);
  }
  return cur;
}

template <xprec::working_real R>
newton_result<R> newton_series(const sparse_system<R>& hom, const std::vector<xprec::xcomplex<R>>& x0,
                               const newton_config<R>& cfg, work_crew& crew) {
  return newton_series(hom, std::span<const xprec::xcomplex<R>>(x0), cfg, crew);
}

}  // namespace pstrack
