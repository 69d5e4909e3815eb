#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pstrack/linalg/lu.hpp"
#include "pstrack/series/truncated_series.hpp"
#include "pstrack/work_crew.hpp"

namespace pstrack {

/// p(t) / q(t) with q_0 = 1.
template <xprec::working_real R>
struct pade_approximant {
  std::vector<xprec::xcomplex<R>> p;  ///< p_0 .. p_K
  std::vector<xprec::xcomplex<R>> q;  ///< q_0 .. q_L

  std::size_t numerator_degree() const noexcept { return p.size() - 1; }
  std::size_t denominator_degree() const noexcept { return q.size() - 1; }
  friend bool operator==(const pade_approximant&, const pade_approximant&) = default;
};

struct pade_degrees {
  std::size_t numerator = 4;
  std::size_t denominator = 4;
};

/// K = L = floor(d/2).
inline pade_degrees default_pade_degrees(std::size_t d) { return {d / 2, d / 2}; }

/// The Toeplitz table for the requested denominator degree was singular;
/// carries the approximant for the largest smaller degree that worked.
template <xprec::working_real R>
class degenerate_pade : public error {
 public:
  degenerate_pade(std::size_t requested, pade_approximant<R> reduced)
      : error("degenerate Pade table: denominator degree " + std::to_string(requested) + " reduced to " +
              std::to_string(reduced.denominator_degree())),
        requested_(requested),
        reduced_(std::move(reduced)) {}
  std::size_t requested_degree() const noexcept { return requested_; }
  std::size_t reduced_degree() const noexcept { return reduced_.denominator_degree(); }
  const pade_approximant<R>& approximant() const noexcept { return reduced_; }

 private:
  std::size_t requested_;
  pade_approximant<R> reduced_;
};

/// The denominator nearly vanishes at the evaluation point.
class pade_pole : public error {
 public:
  using error::error;
};

namespace detail {

/// Solves for q with denominator degree l; empty when the table is singular.
template <xprec::working_real R>
std::optional<pade_approximant<R>> try_pade(const truncated_series<R>& s, std::size_t k, std::size_t l) {
  using C = xprec::xcomplex<R>;
  auto c = [&](std::ptrdiff_t m) { return m < 0 ? C() : s[static_cast<std::size_t>(m)]; };
  pade_approximant<R> a;
  a.q.assign(l + 1, C());
  a.q[0] = C(R(1.0));
  R tail(0.0);
  for (std::size_t m = k + 1; m <= k + l; ++m) tail = std::max(tail, abs(s[m]));
  const R scale = max_abs(s);
  if (l > 0 && tail > R(xprec::real_traits<R>::epsilon) * scale) {
    matrix<R> toeplitz(l, l);
    cvector<R> rhs(l);
    const auto base = static_cast<std::ptrdiff_t>(k + 1);
    for (std::size_t r = 0; r < l; ++r) {
      for (std::size_t j = 1; j <= l; ++j)
        toeplitz(r, j - 1) = c(base + static_cast<std::ptrdiff_t>(r) - static_cast<std::ptrdiff_t>(j));
      rhs[r] = -c(base + static_cast<std::ptrdiff_t>(r));
    }
    try {
      const auto f = lu_factor(std::move(toeplitz));
      if (f.singular_to_working_precision) return std::nullopt;
      const auto sol = lu_solve(f, rhs);
      for (std::size_t j = 1; j <= l; ++j) a.q[j] = sol[j - 1];
    } catch (const singular_matrix&) {
      return std::nullopt;
    }
  }
  a.p.assign(k + 1, C());
  for (std::size_t i = 0; i <= k; ++i) {
    C acc = s[i];
    for (std::size_t j = 1; j <= std::min(i, l); ++j) acc += a.q[j] * s[i - j];
    a.p[i] = acc;
  }
  return a;
}

}  // namespace detail

/// [K/L] approximant matching s through order K + L. A tail
/// c_{K+1} .. c_{K+L} below eps max|c| gives q = 1. A singular Toeplitz
/// table raises degenerate_pade with the largest smaller L that works.
template <xprec::working_real R>
pade_approximant<R> pade_construct(const truncated_series<R>& s, std::size_t k, std::size_t l) {
  if (s.degree() < k + l) throw dimension_error("series degree below K + L");
  for (std::size_t lr = l + 1; lr-- > 0;) {
    if (auto a = detail::try_pade(s, k, lr)) {
      if (lr == l) return std::move(*a);
      throw degenerate_pade<R>(l, std::move(*a));
    }
  }
  throw error("unreachable: L = 0 always succeeds");
}

/// p(delta) / q(delta) by Horner. Raises pade_pole when
/// |q(delta)| <= sqrt(eps) sum |q_j| |delta|^j.
template <xprec::working_real R>
xprec::xcomplex<R> pade_evaluate(const pade_approximant<R>& a, const xprec::xcomplex<R>& delta) {
  using std::sqrt;
  using C = xprec::xcomplex<R>;
  C num, den;
  for (std::size_t i = a.p.size(); i-- > 0;) num = num * delta + a.p[i];
  R bound(0.0);
  const R r = abs(delta);
  for (std::size_t j = a.q.size(); j-- > 0;) {
    den = den * delta + a.q[j];
    bound = bound * r + abs(a.q[j]);
  }
  if (abs(den) <= sqrt(R(xprec::real_traits<R>::epsilon)) * bound)
    throw pade_pole("evaluation point is too close to a pole of the approximant");
  return num / den;
}

/// Power series of p/q through the given degree.
template <xprec::working_real R>
truncated_series<R> expand(const pade_approximant<R>& a, std::size_t degree) {
  truncated_series<R> r(degree);
  for (std::size_t k = 0; k <= degree; ++k) {
    auto acc = k < a.p.size() ? a.p[k] : xprec::xcomplex<R>();
    for (std::size_t j = 1; j <= std::min(k, a.q.size() - 1); ++j) acc -= a.q[j] * r[k - j];
    r[k] = acc;
  }
  return r;
}

struct pade_issue {
  std::size_t component = 0;
  std::size_t requested_degree = 0;
  std::size_t reduced_degree = 0;
};

template <xprec::working_real R>
struct pade_vector_result {
  std::vector<pade_approximant<R>> approximants;
  std::vector<pade_issue> issues;  ///< components whose denominator degree was reduced
};

/// One approximant per component, stride scheduled over the crew.
/// Degenerate tables do not stop the other components; the reduced
/// approximant is used and the reduction is recorded.
template <xprec::working_real R>
pade_vector_result<R> pade_vector(std::span<const truncated_series<R>> x, pade_degrees deg, work_crew& crew) {
  for (const auto& s : x)
    if (s.degree() < deg.numerator + deg.denominator) throw dimension_error("series degree below K + L");
  pade_vector_result<R> out;
  out.approximants.resize(x.size());
  std::vector<std::optional<pade_issue>> found(x.size());
  crew.for_each(x.size(), [&](std::size_t i, std::size_t) {
    try {
      out.approximants[i] = pade_construct(x[i], deg.numerator, deg.denominator);
    } catch (const degenerate_pade<R>& e) {
      out.approximants[i] = e.approximant();
      found[i] = pade_issue{i, e.requested_degree(), e.reduced_degree()};
    }
  });
  for (const auto& f : found)
    if (f) out.issues.push_back(*f);
  return out;
}

template <xprec::working_real R>
pade_vector_result<R> pade_vector(const std::vector<truncated_series<R>>& x, pade_degrees deg, work_crew& crew) {
  return pade_vector(std::span<const truncated_series<R>>(x), deg, crew);
}

/// Evaluates every approximant at delta.
template <xprec::working_real R>
std::vector<xprec::xcomplex<R>> pade_evaluate(std::span<const pade_approximant<R>> a, const xprec::xcomplex<R>& delta) {
  std::vector<xprec::xcomplex<R>> out;
  out.reserve(a.size());
  for (const auto& ai : a) out.push_back(pade_evaluate(ai, delta));
  return out;
}

}  // namespace pstrack
