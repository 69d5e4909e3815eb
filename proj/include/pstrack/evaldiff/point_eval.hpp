#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/evaldiff/product_scheme.hpp"
#include "pstrack/evaldiff/series_eval.hpp"
#include "pstrack/linalg/matrix.hpp"
#include "pstrack/polysys.hpp"
#include "pstrack/work_crew.hpp"

namespace pstrack {

/// Value, gradient and Hessian of one polynomial at a point.
template <xprec::working_real R>
struct hess_result {
  xprec::xcomplex<R> value;
  cvector<R> gradient;
  matrix<R> hessian;  ///< symmetric; the lower triangle mirrors the upper
};

/// Values and Jacobian of a system at a point.
template <xprec::working_real R>
struct point_jacobian {
  cvector<R> values;
  matrix<R> jacobian;
};

/// Point multiplications spent on a Hessian pass.
struct hessian_counts {
  std::size_t product = 0;         ///< forward, backward and cross products
  std::size_t off_diagonal = 0;    ///< running left products and pairings
  std::size_t diagonal_squares = 0;
  std::size_t other = 0;
};

namespace detail {

template <xprec::working_real R>
struct point_workspace {
  using C = xprec::xcomplex<R>;
  product_buffers<C> buffers;
  product_buffers<C> square_buffers;
  std::vector<const C*> factors;
  std::vector<const C*> squares;
  std::vector<C> gradient;
  std::vector<C> square_gradient;
  std::vector<std::size_t> repeated;  // positions k with e_k >= 2
  hessian_counts counts;

  explicit point_workspace(std::size_t m) : gradient(m), square_gradient(m) {
    buffers.reserve(m, C());
    square_buffers.reserve(m, C());
    factors.reserve(m);
    squares.reserve(m);
    repeated.reserve(m);
  }
};

template <xprec::working_real R>
void point_mul(const xprec::xcomplex<R>& a, const xprec::xcomplex<R>& b, xprec::xcomplex<R>& c) {
  c = a * b;
}

/// x^k from the table, with x^0 = 1 and x^1 = x.
template <xprec::working_real R>
xprec::xcomplex<R> point_power(const power_table<xprec::xcomplex<R>>& table, std::span<const xprec::xcomplex<R>> x,
                               std::uint32_t var, std::uint32_t k) {
  if (k == 0) return xprec::xcomplex<R>(R(1.0));
  if (k == 1) return x[var];
  return table.power(var, k);
}

/// Adds one monomial's value, gradient and (optionally) Hessian upper
/// triangle and diagonal. c is the coefficient at t = 0.
template <xprec::working_real R>
void accumulate_point_monomial(const monomial<R>& mono, std::span<const xprec::xcomplex<R>> x,
                               const power_table<xprec::xcomplex<R>>& table, point_workspace<R>& ws,
                               xprec::xcomplex<R>& value, std::span<xprec::xcomplex<R>> gradient, matrix<R>* hessian) {
  using C = xprec::xcomplex<R>;
  const C& c = mono.coefficient[0];
  const std::size_t m = mono.support.size();
  if (m == 0) {
    value += c;
    return;
  }
  auto weight = [](std::uint32_t w) { return R(static_cast<double>(w)); };
  // coefficient times common factor
  C scaled = c;
  ws.repeated.clear();
  for (std::size_t k = 0; k < m; ++k) {
    const std::uint32_t e = mono.exponents[k];
    if (e < 2) continue;
    ws.repeated.push_back(k);
    scaled *= point_power(table, x, mono.support[k], e - 1);
    ++ws.counts.other;
  }

  const C one(R(1.0));
  ws.factors.clear();
  for (auto v : mono.support) ws.factors.push_back(&x[v]);
  C product;
  ws.counts.product +=
      product_gradient<C>(ws.factors, product, std::span<C>(ws.gradient.data(), m), ws.buffers, one, point_mul<R>);
  value += scaled * product;
  for (std::size_t k = 0; k < m; ++k) {
    C g = scaled * ws.gradient[k];
    if (mono.exponents[k] != 1) g = g * weight(mono.exponents[k]);
    gradient[mono.support[k]] += g;
  }
  if (!hessian) return;

  // off-diagonal: e_a e_b * scaled * prod_{j != a,b} x_j
  ws.counts.off_diagonal += product_hessian<C>(ws.factors, ws.buffers, one, point_mul<R>,
                                               [&](std::size_t a, std::size_t b, const C& h) {
                                                 C entry = scaled * h;
                                                 const std::uint32_t w = mono.exponents[a] * mono.exponents[b];
                                                 if (w != 1) entry = entry * weight(w);
                                                 (*hessian)(mono.support[a], mono.support[b]) += entry;
                                               });

  // diagonal: e_k (e_k - 1) c * prod_{D} x^{e-2} * prod_{D \ k} x^2 * prod_{e = 1} x
  const std::size_t r = ws.repeated.size();
  if (r == 0) return;
  C rest = c;
  for (std::size_t k = 0; k < m; ++k) {
    const std::uint32_t e = mono.exponents[k];
    if (e == 1) {
      rest *= x[mono.support[k]];
      ++ws.counts.other;
    } else if (e > 2) {
      rest *= point_power(table, x, mono.support[k], e - 2);
      ++ws.counts.other;
    }
  }
  if (r < 3) {
    for (std::size_t q = 0; q < r; ++q) {
      const std::size_t k = ws.repeated[q];
      C h = rest;
      if (r == 2) {
        const std::size_t other = ws.repeated[1 - q];
        h *= table.power(mono.support[other], 2);
        ++ws.counts.other;
      }
      const std::uint32_t e = mono.exponents[k];
      (*hessian)(mono.support[k], mono.support[k]) += h * weight(e * (e - 1));
    }
    return;
  }
  ws.squares.clear();
  for (std::size_t k : ws.repeated) ws.squares.push_back(&table.power(mono.support[k], 2));
  C square_product;
  ws.counts.diagonal_squares += product_gradient<C>(ws.squares, square_product,
                                                    std::span<C>(ws.square_gradient.data(), r), ws.square_buffers,
                                                    one, point_mul<R>);
  for (std::size_t q = 0; q < r; ++q) {
    const std::size_t k = ws.repeated[q];
    const std::uint32_t e = mono.exponents[k];
    (*hessian)(mono.support[k], mono.support[k]) += rest * ws.square_gradient[q] * weight(e * (e - 1));
  }
}

template <xprec::working_real R>
void check_point_input(const sparse_system<R>& sys, std::span<const xprec::xcomplex<R>> x) {
  if (x.size() != sys.variables())
    throw dimension_error("expected a point of dimension " + std::to_string(sys.variables()) + ", got " +
                          std::to_string(x.size()));
}

template <xprec::working_real R>
power_table<xprec::xcomplex<R>> point_power_table(const sparse_system<R>& sys, std::span<const xprec::xcomplex<R>> x,
                                                  power_usage usage) {
  return power_table<xprec::xcomplex<R>>(x, power_requirements(sys, usage), point_mul<R>, xprec::xcomplex<R>());
}

}  // namespace detail

/// Value, gradient and Hessian of every polynomial at the point x, one job
/// per polynomial over the crew. Coefficients are taken at t = 0.
template <xprec::working_real R>
std::vector<hess_result<R>> hessian_point(const sparse_system<R>& sys, std::span<const xprec::xcomplex<R>> x,
                                          work_crew& crew, hessian_counts* counts = nullptr) {
  detail::check_point_input(sys, x);
  const std::size_t n = sys.variables();
  const auto table = detail::point_power_table(sys, x, power_usage::hessian);
  std::vector<hess_result<R>> out(sys.size());
  std::vector<detail::point_workspace<R>> spaces;
  for (std::size_t w = 0; w < crew.size(); ++w) spaces.emplace_back(detail::widest_support(sys));
  crew.for_each(sys.size(), [&](std::size_t i, std::size_t w) {
    hess_result<R>& res = out[i];
    res.gradient.assign(n, {});
    res.hessian = matrix<R>(n, n);
    for (const auto& mono : sys[i])
      detail::accumulate_point_monomial(mono, x, table, spaces[w], res.value, std::span(res.gradient), &res.hessian);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) res.hessian(b, a) = res.hessian(a, b);
  });
  if (counts) {
    for (const auto& ws : spaces) {
      counts->product += ws.counts.product;
      counts->off_diagonal += ws.counts.off_diagonal;
      counts->diagonal_squares += ws.counts.diagonal_squares;
      counts->other += ws.counts.other;
    }
  }
  return out;
}

template <xprec::working_real R>
std::vector<hess_result<R>> hessian_point(const sparse_system<R>& sys, const cvector<R>& x, work_crew& crew,
                                          hessian_counts* counts = nullptr) {
  return hessian_point(sys, std::span<const xprec::xcomplex<R>>(x), crew, counts);
}

/// Values and Jacobian at the point x (coefficients at t = 0).
template <xprec::working_real R>
point_jacobian<R> eval_jacobian_point(const sparse_system<R>& sys, std::span<const xprec::xcomplex<R>> x,
                                      work_crew& crew) {
  detail::check_point_input(sys, x);
  const std::size_t n = sys.variables();
  const auto table = detail::point_power_table(sys, x, power_usage::common_factor);
  point_jacobian<R> out{cvector<R>(sys.size()), matrix<R>(sys.size(), n)};
  std::vector<detail::point_workspace<R>> spaces;
  for (std::size_t w = 0; w < crew.size(); ++w) spaces.emplace_back(detail::widest_support(sys));
  crew.for_each(sys.size(), [&](std::size_t i, std::size_t w) {
    for (const auto& mono : sys[i])
      detail::accumulate_point_monomial(mono, x, table, spaces[w], out.values[i], out.jacobian.row(i),
                                        static_cast<matrix<R>*>(nullptr));
  });
  return out;
}

template <xprec::working_real R>
point_jacobian<R> eval_jacobian_point(const sparse_system<R>& sys, const cvector<R>& x, work_crew& crew) {
  return eval_jacobian_point(sys, std::span<const xprec::xcomplex<R>>(x), crew);
}

}  // namespace pstrack
