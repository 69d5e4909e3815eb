#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/polysys/system.hpp"
#include "pstrack/random.hpp"

namespace pstrack {

/// Cyclic n-roots: for i = 1 .. n-1 the sum over j of the products of i
/// cyclically consecutive variables starting at x_j, then x_0 ... x_{n-1} - 1.
template <xprec::working_real R>
sparse_system<R> generate_cyclic(std::size_t n, std::size_t degree = 0) {
  if (n < 2) throw domain_error("cyclic systems need n >= 2");
  using C = xprec::xcomplex<R>;
  const auto one = truncated_series<R>::constant(C(R(1.0)), degree);
  std::vector<polynomial<R>> polys;
  for (std::size_t i = 1; i < n; ++i) {
    polynomial<R> p;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::uint32_t> e(n, 0);
      for (std::size_t k = j; k < j + i; ++k) e[k % n] = 1;
      p.push_back(monomial<R>::from_exponents(one, e));
    }
    polys.push_back(std::move(p));
  }
  std::vector<std::uint32_t> all(n, 1);
  polynomial<R> last;
  last.push_back(monomial<R>::from_exponents(one, all));
  last.push_back(monomial<R>::constant(truncated_series<R>::constant(C(R(-1.0)), degree)));
  polys.push_back(std::move(last));
  return sparse_system<R>(n, degree, std::move(polys));
}

/// c * omega^k with omega = exp(2 pi i / n); c = 1 for odd n and
/// exp(i pi / n) for even n, so that the product of all entries is 1.
/// This point solves the cyclic n-roots system.
template <xprec::working_real R>
std::vector<xprec::xcomplex<R>> cyclic_root_of_unity_point(std::size_t n) {
  std::vector<xprec::xcomplex<R>> x;
  const double base = n % 2 == 0 ? std::numbers::pi / static_cast<double>(n) : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = base + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    x.push_back({R(std::cos(angle)), R(std::sin(angle))});
  }
  return x;
}

/// n polynomials of `terms` monomials each; every exponent uniform in
/// [0, max_exponent], coefficients uniform on the unit circle.
template <xprec::working_real R>
sparse_system<R> generate_random(std::size_t n, std::size_t terms, std::uint32_t max_exponent, std::uint64_t seed,
                                 std::size_t degree = 0) {
  if (n == 0 || terms == 0) throw domain_error("random systems need n >= 1 and terms >= 1");
  if (max_exponent == 0) throw domain_error("random systems need max_exponent >= 1");
  random_source rng(seed);
  std::vector<polynomial<R>> polys(n);
  std::vector<std::uint32_t> e(n);
  for (auto& p : polys) {
    for (std::size_t m = 0; m < terms; ++m) {
      for (auto& ei : e) ei = static_cast<std::uint32_t>(rng.below(max_exponent + 1));
      const auto c = truncated_series<R>::constant(rng.unit_circle<R>(), degree);
      p.push_back(monomial<R>::from_exponents(c, e));
    }
  }
  return sparse_system<R>(n, degree, std::move(polys));
}

/// Adds the parameter t to every polynomial. The result has degree at
/// least 1 so that t is representable.
template <xprec::working_real R>
sparse_system<R> make_newton_homotopy(const sparse_system<R>& sys) {
  if (sys.is_homotopy()) throw domain_error("newton homotopy needs a system with constant coefficients");
  const std::size_t d = std::max<std::size_t>(sys.degree(), 1);
  const sparse_system<R> base = with_degree(sys, d);
  std::vector<polynomial<R>> polys(base.polynomials().begin(), base.polynomials().end());
  truncated_series<R> t(d);
  t[1] = xprec::xcomplex<R>(R(1.0));
  for (auto& p : polys) p.push_back(monomial<R>::constant(t));
  return sparse_system<R>(base.variables(), d, std::move(polys));
}

/// Appends the constant -f_i(x0, 0) to every polynomial so that x0 becomes
/// an exact root at t = 0.
template <xprec::working_real R>
sparse_system<R> recenter_at(const sparse_system<R>& sys, std::span<const xprec::xcomplex<R>> x0) {
  const auto values = evaluate_at(sys, x0);
  std::vector<polynomial<R>> polys(sys.polynomials().begin(), sys.polynomials().end());
  for (std::size_t i = 0; i < polys.size(); ++i)
    polys[i].push_back(monomial<R>::constant(truncated_series<R>::constant(-values[i], sys.degree())));
  return sparse_system<R>(sys.variables(), sys.degree(), std::move(polys));
}

/// n coordinates on the unit circle, so every monomial has modulus one.
template <xprec::working_real R>
std::vector<xprec::xcomplex<R>> random_point(std::size_t n, std::uint64_t seed) {
  random_source rng(seed);
  std::vector<xprec::xcomplex<R>> x;
  for (std::size_t i = 0; i < n; ++i) x.push_back(rng.unit_circle<R>());
  return x;
}

}  // namespace pstrack
