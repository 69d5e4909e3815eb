#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/series.hpp"

namespace pstrack {

/// c(t) * prod x_i^{e_i}, stored sparsely. The product part is
/// prod_{i in support} x_i and the common factor is prod x_i^{e_i - 1}.
template <xprec::working_real R>
struct monomial {
  truncated_series<R> coefficient;
  std::vector<std::uint32_t> support;    ///< increasing variable indices with e_i >= 1
  std::vector<std::uint32_t> exponents;  ///< exponents[k] is the power of support[k]

  static monomial from_exponents(truncated_series<R> coefficient, std::span<const std::uint32_t> e) {
    monomial m{std::move(coefficient), {}, {}};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) {
        m.support.push_back(static_cast<std::uint32_t>(i));
        m.exponents.push_back(e[i]);
      }
    }
    return m;
  }

  static monomial constant(truncated_series<R> coefficient) { return {std::move(coefficient), {}, {}}; }

  bool is_constant() const noexcept { return support.empty(); }

  std::uint32_t total_degree() const noexcept {
    std::uint32_t s = 0;
    for (auto e : exponents) s += e;
    return s;
  }

  std::uint32_t max_exponent() const noexcept {
    std::uint32_t m = 0;
    for (auto e : exponents) m = std::max(m, e);
    return m;
  }

  /// Full exponent vector of length n.
  std::vector<std::uint32_t> exponent_vector(std::size_t n) const {
    std::vector<std::uint32_t> e(n, 0);
    for (std::size_t k = 0; k < support.size(); ++k) e.at(support[k]) = exponents[k];
    return e;
  }

  void validate(std::size_t n) const {
    if (support.size() != exponents.size()) throw dimension_error("monomial support and exponents differ in length");
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (support[k] >= n)
        throw dimension_error("variable index " + std::to_string(support[k]) + " out of range for n = " +
                              std::to_string(n));
      if (k > 0 && support[k] <= support[k - 1]) throw dimension_error("monomial support must be increasing");
      if (exponents[k] == 0) throw dimension_error("support variable with zero exponent");
    }
  }

  friend bool operator==(const monomial&, const monomial&) = default;
};

template <xprec::working_real R>
using polynomial = std::vector<monomial<R>>;

/// n variables, a list of polynomials, coefficient series of degree d.
template <xprec::working_real R>
class sparse_system {
 public:
  using real_type = R;

  sparse_system(std::size_t n, std::size_t degree, std::vector<polynomial<R>> polys)
      : n_(n), degree_(degree), polys_(std::move(polys)) {
    if (n_ == 0) throw dimension_error("a system needs at least one variable");
    for (const auto& p : polys_) {
      if (p.empty()) throw dimension_error("every polynomial needs at least one monomial");
      for (const auto& m : p) {
        m.validate(n_);
        if (m.coefficient.degree() != degree_)
          throw dimension_error("coefficient degree " + std::to_string(m.coefficient.degree()) +
                                " differs from system degree " + std::to_string(degree_));
      }
    }
  }

  std::size_t variables() const noexcept { return n_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return polys_.size(); }
  bool is_square() const noexcept { return polys_.size() == n_; }

  const polynomial<R>& operator[](std::size_t i) const { return polys_[i]; }
  std::span<const polynomial<R>> polynomials() const noexcept { return polys_; }

  /// True when some coefficient depends on t.
  bool is_homotopy() const {
    for (const auto& p : polys_)
      for (const auto& m : p)
        if (!m.coefficient.is_constant()) return true;
    return false;
  }

  std::uint32_t max_exponent() const {
    std::uint32_t e = 0;
    for (const auto& p : polys_)
      for (const auto& m : p) e = std::max(e, m.max_exponent());
    return e;
  }

  std::size_t monomial_count() const {
    std::size_t c = 0;
    for (const auto& p : polys_) c += p.size();
    return c;
  }

  friend bool operator==(const sparse_system&, const sparse_system&) = default;

 private:
  std::size_t n_;
  std::size_t degree_;
  std::vector<polynomial<R>> polys_;
};

/// Same system with coefficient series truncated or zero-extended to degree d.
template <xprec::working_real R>
sparse_system<R> with_degree(const sparse_system<R>& sys, std::size_t d) {
  std::vector<polynomial<R>> polys(sys.polynomials().begin(), sys.polynomials().end());
  for (auto& p : polys) {
    for (auto& m : p) {
      truncated_series<R> c(d);
      for (std::size_t k = 0; k <= std::min(d, m.coefficient.degree()); ++k) c[k] = m.coefficient[k];
      m.coefficient = std::move(c);
    }
  }
  return sparse_system<R>(sys.variables(), d, std::move(polys));
}

/// Applies f to every coefficient series, returning the new system.
template <xprec::working_real R, class F>
sparse_system<R> map_coefficients(const sparse_system<R>& sys, F&& f) {
  std::vector<polynomial<R>> polys(sys.polynomials().begin(), sys.polynomials().end());
  for (auto& p : polys)
    for (auto& m : p) m.coefficient = f(m.coefficient);
  return sparse_system<R>(sys.variables(), sys.degree(), std::move(polys));
}

/// Direct evaluation of every polynomial at x and parameter value t, by
/// repeated multiplication. Reference path for residual checks.
template <xprec::working_real R>
std::vector<xprec::xcomplex<R>> evaluate_at(const sparse_system<R>& sys, std::span<const xprec::xcomplex<R>> x,
                                            const xprec::xcomplex<R>& t = {}) {
  if (x.size() != sys.variables()) throw dimension_error("point dimension does not match the system");
  std::vector<xprec::xcomplex<R>> out;
  out.reserve(sys.size());
  for (const auto& p : sys.polynomials()) {
    xprec::xcomplex<R> acc;
    for (const auto& m : p) {
      xprec::xcomplex<R> term = evaluate(m.coefficient, t);
      for (std::size_t k = 0; k < m.support.size(); ++k)
        for (std::uint32_t e = 0; e < m.exponents[k]; ++e) term *= x[m.support[k]];
      acc += term;
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace pstrack
