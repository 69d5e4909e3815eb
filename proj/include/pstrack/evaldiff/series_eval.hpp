#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/evaldiff/product_scheme.hpp"
#include "pstrack/polysys.hpp"
#include "pstrack/work_crew.hpp"

namespace pstrack {

/// Series multiplications spent, split by purpose.
struct multiplication_counts {
  std::size_t product = 0;        ///< forward, backward and cross products
  std::size_t common_factor = 0;  ///< assembling prod x_i^{e_i - 1}
  std::size_t coefficient = 0;    ///< coefficient times common factor and results
  std::size_t power_table = 0;

  std::size_t total() const noexcept { return product + common_factor + coefficient + power_table; }
  multiplication_counts& operator+=(const multiplication_counts& o) {
    product += o.product;
    common_factor += o.common_factor;
    coefficient += o.coefficient;
    power_table += o.power_table;
    return *this;
  }
};

/// Values of all polynomials and their Jacobian, as series.
template <xprec::working_real R>
struct eval_jac_result {
  std::size_t variables = 0;
  std::vector<truncated_series<R>> values;    ///< one per polynomial
  std::vector<truncated_series<R>> jacobian;  ///< row-major, rows = polynomials
  multiplication_counts counts;

  const truncated_series<R>& jac(std::size_t i, std::size_t j) const { return jacobian[i * variables + j]; }
};

template <xprec::working_real R>
struct product_derivatives {
  truncated_series<R> value;
  std::vector<truncated_series<R>> gradient;
  std::size_t multiplications = 0;
};

/// Value and gradient of prod vars via forward, backward and cross products.
template <xprec::working_real R>
product_derivatives<R> eval_diff_product(std::span<const truncated_series<R>> vars) {
  if (vars.empty()) throw dimension_error("product of no factors");
  const std::size_t d = vars[0].degree();
  for (const auto& v : vars) truncated_series<R>::check_same_degree(vars[0], v);
  std::vector<const truncated_series<R>*> ptrs;
  for (const auto& v : vars) ptrs.push_back(&v);
  product_buffers<truncated_series<R>> buf;
  buf.reserve(vars.size(), truncated_series<R>(d));
  product_derivatives<R> out{truncated_series<R>(d), std::vector<truncated_series<R>>(vars.size(), truncated_series<R>(d)), 0};
  const auto one = truncated_series<R>::constant(xprec::xcomplex<R>(R(1.0)), d);
  out.multiplications = product_gradient<truncated_series<R>>(
      ptrs, out.value, out.gradient, buf, one,
      [](const truncated_series<R>& a, const truncated_series<R>& b, truncated_series<R>& c) {
        convolve_into(a, b, c, a.degree());
      });
  return out;
}

template <xprec::working_real R>
product_derivatives<R> eval_diff_product(const std::vector<truncated_series<R>>& vars) {
  return eval_diff_product(std::span<const truncated_series<R>>(vars));
}

namespace detail {

template <xprec::working_real R>
struct series_workspace {
  using series = truncated_series<R>;
  product_buffers<series> buffers;
  std::vector<const series*> factors;
  std::vector<series> gradient;
  series product;
  series common;
  series scaled;  // coefficient times common factor
  series term;
  series one;
  multiplication_counts counts;

  series_workspace(std::size_t m, std::size_t d)
      : gradient(m, series(d)), product(d), common(d), scaled(d), term(d),
        one(series::constant(xprec::xcomplex<R>(R(1.0)), d)) {
    buffers.reserve(m, series(d));
    factors.reserve(m);
  }
};

/// Adds c(t) * prod x^e and its partial derivatives into value and the
/// gradient row (indexed by variable).
template <xprec::working_real R>
void accumulate_monomial(const monomial<R>& mono, std::span<const truncated_series<R>> x,
                         const power_table<truncated_series<R>>& table, series_workspace<R>& ws,
                         truncated_series<R>& value, std::span<truncated_series<R>> gradient_row) {
  using series = truncated_series<R>;
  auto mul = [](const series& a, const series& b, series& c) { convolve_into(a, b, c, a.degree()); };
  const std::size_t m = mono.support.size();
  if (m == 0) {
    value += mono.coefficient;
    return;
  }
  // common factor prod x_i^{e_i - 1}
  const series* common = nullptr;
  series* acc = &ws.common;
  series* spare = &ws.term;
  for (std::size_t k = 0; k < m; ++k) {
    const std::uint32_t e = mono.exponents[k];
    if (e < 2) continue;
    const series& p = e == 2 ? x[mono.support[k]] : table.power(mono.support[k], e - 1);
    if (!common) {
      common = &p;
    } else {
      mul(*common, p, *spare);
      ++ws.counts.common_factor;
      std::swap(acc, spare);
      common = acc;
    }
  }
  const std::size_t top = mono.coefficient.top();
  const series* scaled = &mono.coefficient;
  if (common) {
    convolve_into(mono.coefficient, *common, ws.scaled, top);
    ++ws.counts.coefficient;
    scaled = &ws.scaled;
  }
  const std::size_t scaled_top = common ? scaled->degree() : top;

  if (m == 1 && mono.exponents[0] == 1) {
    convolve_into(*scaled, x[mono.support[0]], ws.term, scaled_top);
    ++ws.counts.coefficient;
    value += ws.term;
    gradient_row[mono.support[0]] += *scaled;
    return;
  }

  ws.factors.clear();
  for (auto v : mono.support) ws.factors.push_back(&x[v]);
  ws.counts.product += product_gradient<series>(ws.factors, ws.product, std::span<series>(ws.gradient.data(), m),
                                                ws.buffers, ws.one, mul);
  convolve_into(*scaled, ws.product, ws.term, scaled_top);
  ++ws.counts.coefficient;
  value += ws.term;
  for (std::size_t k = 0; k < m; ++k) {
    convolve_into(*scaled, ws.gradient[k], ws.term, scaled_top);
    ++ws.counts.coefficient;
    if (mono.exponents[k] != 1) ws.term *= R(static_cast<double>(mono.exponents[k]));
    gradient_row[mono.support[k]] += ws.term;
  }
}

template <xprec::working_real R>
std::size_t widest_support(const sparse_system<R>& sys) {
  std::size_t m = 1;
  for (const auto& p : sys.polynomials())
    for (const auto& mono : p) m = std::max(m, mono.support.size());
  return m;
}

template <xprec::working_real R>
void check_series_input(const sparse_system<R>& sys, std::span<const truncated_series<R>> x) {
  if (x.size() != sys.variables())
    throw dimension_error("expected " + std::to_string(sys.variables()) + " series, got " + std::to_string(x.size()));
  for (const auto& s : x)
    if (s.degree() != sys.degree())
      throw dimension_error("series degree " + std::to_string(s.degree()) + " differs from system degree " +
                            std::to_string(sys.degree()));
}

}  // namespace detail

/// Value and full gradient (length = number of series in x) of a single
/// monomial, using the power table for the common factor.
template <xprec::working_real R>
product_derivatives<R> eval_diff_monomial(const monomial<R>& mono, std::span<const truncated_series<R>> x,
                                          const power_table<truncated_series<R>>& table,
                                          multiplication_counts* counts = nullptr) {
  if (x.empty()) throw dimension_error("no variables");
  mono.validate(x.size());
  const std::size_t d = x[0].degree();
  detail::series_workspace<R> ws(std::max<std::size_t>(mono.support.size(), 1), d);
  product_derivatives<R> out{truncated_series<R>(d), std::vector<truncated_series<R>>(x.size(), truncated_series<R>(d)), 0};
  detail::accumulate_monomial(mono, x, table, ws, out.value, std::span<truncated_series<R>>(out.gradient));
  out.multiplications = ws.counts.total();
  if (counts) *counts += ws.counts;
  return out;
}

/// Power table for the common factors of sys at the series x.
template <xprec::working_real R>
power_table<truncated_series<R>> series_power_table(const sparse_system<R>& sys,
                                                    std::span<const truncated_series<R>> x) {
  const auto need = power_requirements(sys, power_usage::common_factor);
  return power_table<truncated_series<R>>(
      x, need,
      [](const truncated_series<R>& a, const truncated_series<R>& b, truncated_series<R>& c) {
        convolve_into(a, b, c, a.degree());
      },
      truncated_series<R>(sys.degree()));
}

/// Evaluates and differentiates every polynomial at the series x. One job
/// per polynomial, stride scheduled over the crew; monomials are summed in
/// input order so the result does not depend on the crew size.
template <xprec::working_real R>
eval_jac_result<R> eval_diff_system(const sparse_system<R>& sys, std::span<const truncated_series<R>> x,
                                    work_crew& crew) {
  detail::check_series_input(sys, x);
  const std::size_t n = sys.variables();
  const std::size_t d = sys.degree();
  const auto table = series_power_table(sys, x);
  eval_jac_result<R> out;
  out.variables = n;
  out.values.assign(sys.size(), truncated_series<R>(d));
  out.jacobian.assign(sys.size() * n, truncated_series<R>(d));
  const std::size_t width = detail::widest_support(sys);
  std::vector<detail::series_workspace<R>> spaces;
  spaces.reserve(crew.size());
  for (std::size_t w = 0; w < crew.size(); ++w) spaces.emplace_back(width, d);
  crew.for_each(sys.size(), [&](std::size_t i, std::size_t w) {
    std::span<truncated_series<R>> row(out.jacobian.data() + i * n, n);
    for (const auto& mono : sys[i]) detail::accumulate_monomial(mono, x, table, spaces[w], out.values[i], row);
  });
  out.counts.power_table = table.multiplications();
  for (const auto& ws : spaces) out.counts += ws.counts;
  return out;
}

template <xprec::working_real R>
eval_jac_result<R> eval_diff_system(const sparse_system<R>& sys, const std::vector<truncated_series<R>>& x,
                                    work_crew& crew) {
  return eval_diff_system(sys, std::span<const truncated_series<R>>(x), crew);
}

}  // namespace pstrack
