#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/linalg/matrix.hpp"

namespace pstrack {

template <xprec::working_real R>
struct svd_result {
  std::vector<R> singular_values;  ///< decreasing, non-negative
  matrix<R> u;                     ///< rows x k, set when vectors were requested
  matrix<R> v;                     ///< cols x k, set when vectors were requested
  bool has_vectors = false;
  std::size_t sweeps = 0;

  const R& largest() const { return singular_values.front(); }
  const R& smallest() const { return singular_values.back(); }
};

/// Thrown when the Jacobi sweeps do not converge; carries the last iterate.
template <xprec::working_real R>
class svd_not_converged : public error {
 public:
  explicit svd_not_converged(svd_result<R> best)
      : error("singular value decomposition did not converge"), best_(std::move(best)) {}
  const svd_result<R>& best() const noexcept { return best_; }

 private:
  svd_result<R> best_;
};

inline constexpr std::size_t svd_sweep_limit = 30;

namespace detail {

/// One-sided Jacobi on the columns of a (rows >= cols).
template <xprec::working_real R>
svd_result<R> jacobi_svd_tall(const matrix<R>& a, bool want_vectors) {
  using C = xprec::xcomplex<R>;
  using std::abs;
  using std::sqrt;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::vector<C>> w(n, std::vector<C>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) w[j][i] = a(i, j);
  std::vector<std::vector<C>> v;
  if (want_vectors) {
    v.assign(n, std::vector<C>(n));
    for (std::size_t j = 0; j < n; ++j) v[j][j] = C(R(1.0));
  }
  const R tol(static_cast<double>(std::max<std::size_t>(m, 1)) * xprec::real_traits<R>::epsilon);
  const R one(1.0);
  R total(0.0);
  for (const auto& z : a.data()) total += norm(z);
  const R noise_sq = tol * tol * total;

  auto rotate = [](std::vector<C>& p, std::vector<C>& q, const R& c, const R& s, const C& u) {
    const C su = u * s;
    const C sub = conj(u) * s;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const C xp = p[i];
      const C xq = q[i];
      p[i] = xp * c - sub * xq;
      q[i] = su * xp + xq * c;
    }
  };

  std::size_t sweep = 0;
  bool converged = n < 2;
  while (!converged && sweep < svd_sweep_limit) {
    ++sweep;
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        R alpha(0.0), beta(0.0);
        C gamma;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += norm(w[p][i]);
          beta += norm(w[q][i]);
          gamma += conj(w[p][i]) * w[q][i];
        }
        const R g = abs(gamma);
        if (g == R(0.0) || g <= tol * sqrt(alpha * beta)) continue;
        if (alpha <= noise_sq || beta <= noise_sq) continue;
        rotated = true;
        const R zeta = (beta - alpha) / (g + g);
        const R t = (zeta < R(0.0) ? -one : one) / (abs(zeta) + sqrt(one + zeta * zeta));
        const R c = one / sqrt(one + t * t);
        const R s = c * t;
        const C u = gamma / g;
        rotate(w[p], w[q], c, s, u);
        if (want_vectors) rotate(v[p], v[q], c, s, u);
      }
    }
    converged = !rotated;
  }

  std::vector<R> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    R s(0.0);
    for (const auto& z : w[j]) s += norm(z);
    sigma[j] = sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  svd_result<R> out;
  out.sweeps = sweep;
  for (std::size_t k = 0; k < n; ++k) out.singular_values.push_back(sigma[order[k]]);
  if (want_vectors) {
    out.has_vectors = true;
    out.u = matrix<R>(m, n);
    out.v = matrix<R>(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = order[k];
      if (sigma[j] > R(0.0))
        for (std::size_t i = 0; i < m; ++i) out.u(i, k) = w[j][i] / sigma[j];
      for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v[j][i];
    }
  }
  if (!converged) throw svd_not_converged<R>(std::move(out));
  return out;
}

}  // namespace detail

/// Singular values (and optionally vectors) by one-sided Jacobi rotations.
/// A pair of columns counts as orthogonal when
/// |a_p^H a_q| <= m eps ||a_p|| ||a_q||, or when either column has norm at most
/// m eps ||A||_F. Wide matrices are handled through their adjoint.
template <xprec::working_real R>
svd_result<R> svd(const matrix<R>& a, bool want_vectors = false) {
  if (a.rows() == 0 || a.cols() == 0) throw dimension_error("svd of an empty matrix");
  for (const auto& z : a.data())
    if (!xprec::is_finite(z)) throw domain_error("svd needs finite entries");
  if (a.rows() >= a.cols()) return detail::jacobi_svd_tall(a, want_vectors);
  try {
    svd_result<R> r = detail::jacobi_svd_tall(adjoint(a), want_vectors);
    std::swap(r.u, r.v);
    return r;
  } catch (svd_not_converged<R>& e) {
    svd_result<R> r = e.best();
    std::swap(r.u, r.v);
    throw svd_not_converged<R>(std::move(r));
  }
}

/// sigma_max / sigma_min, +inf when sigma_min is zero.
template <xprec::working_real R>
R condition(const matrix<R>& a) {
  const auto r = svd(a);
  if (r.smallest() == R(0.0)) return xprec::infinity<R>();
  return r.largest() / r.smallest();
}

}  // namespace pstrack
