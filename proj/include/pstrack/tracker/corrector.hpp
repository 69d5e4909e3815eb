#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "pstrack/evaldiff/point_eval.hpp"
#include "pstrack/linalg/lu.hpp"

namespace pstrack {

template <xprec::working_real R>
struct corrector_result {
  cvector<R> x;
  R residual{0.0};  ///< ||H(x, 0)||_2
  std::size_t iterations = 0;
};

class corrector_failure : public error {
 public:
  enum class reason { diverged, max_iterations };
  corrector_failure(reason r, const std::string& what) : error(what), reason_(r) {}
  reason why() const noexcept { return reason_; }

 private:
  reason reason_;
};

/// eps^(3/4).
template <xprec::working_real R>
R default_corrector_tolerance() {
  return R(std::pow(xprec::real_traits<R>::epsilon, 0.75));
}

/// Point Newton on H(x, 0) = 0. Returns without iterating when the guess
/// already has residual <= tol; otherwise stops once the residual is <= tol
/// or the update is <= tol (1 + ||x||). A growing update or running out of
/// iterations raises corrector_failure; a singular Jacobian raises
/// singular_matrix.
template <xprec::working_real R>
corrector_result<R> corrector(const sparse_system<R>& hom, std::span<const xprec::xcomplex<R>> guess, const R& tol,
                              std::size_t max_iters, work_crew& crew) {
  if (!(tol > R(0.0))) throw domain_error("corrector tolerance must be positive");
  corrector_result<R> out;
  out.x.assign(guess.begin(), guess.end());
  for (const auto& z : out.x)
    if (!xprec::is_finite(z)) throw domain_error("corrector start point is not finite");
  auto ev = eval_jacobian_point(hom, out.x, crew);
  out.residual = norm2(ev.values);
  if (out.residual <= tol) return out;
  R previous = xprec::infinity<R>();
  for (std::size_t it = 1; it <= max_iters; ++it) {
    cvector<R> rhs(ev.values.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -ev.values[i];
    const auto dx = lu_solve(lu_factor(std::move(ev.jacobian)), rhs);
    const R step = norm2(dx);
    if (step > previous)
      throw corrector_failure(corrector_failure::reason::diverged, "corrector update grew");
    for (std::size_t i = 0; i < dx.size(); ++i) out.x[i] += dx[i];
    ev = eval_jacobian_point(hom, out.x, crew);
    out.residual = norm2(ev.values);
    out.iterations = it;
    if (out.residual <= tol || step <= tol * (R(1.0) + norm2(out.x))) return out;
    previous = step;
  }
  throw corrector_failure(corrector_failure::reason::max_iterations, "corrector did not converge");
}

template <xprec::working_real R>
corrector_result<R> corrector(const sparse_system<R>& hom, const cvector<R>& guess, const R& tol,
                              std::size_t max_iters, work_crew& crew) {
  return corrector(hom, std::span<const xprec::xcomplex<R>>(guess), tol, max_iters, crew);
}

/// Moves the origin of t to delta: every coefficient series c(t) becomes
/// c(t + delta). One job per polynomial.
template <xprec::working_real R>
sparse_system<R> shift_homotopy(const sparse_system<R>& hom, const xprec::xcomplex<R>& delta, work_crew& crew) {
  std::vector<polynomial<R>> polys(hom.polynomials().begin(), hom.polynomials().end());
  crew.for_each(polys.size(), [&](std::size_t i, std::size_t) {
    for (auto& m : polys[i]) m.coefficient = shift(m.coefficient, delta);
  });
  return sparse_system<R>(hom.variables(), hom.degree(), std::move(polys));
}

}  // namespace pstrack
