#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/linalg/matrix.hpp"

namespace pstrack {

/// P A = L U with unit lower L and upper U packed in one matrix.
template <xprec::working_real R>
struct lu_factors {
  matrix<R> packed;
  std::vector<std::size_t> row_of;  ///< row_of[k] = original row placed at position k
  R max_entry{0.0};                 ///< max |a_ij| of the input
  R min_pivot{0.0};                 ///< min |u_kk|
  bool singular_to_working_precision = false;

  std::size_t size() const noexcept { return packed.rows(); }
};

/// Gaussian elimination with partial (row) pivoting. Throws singular_matrix
/// when a pivot column is exactly zero; flags the factors when
/// min |u_kk| <= n eps max |a_ij|.
template <xprec::working_real R>
lu_factors<R> lu_factor(matrix<R> a) {
  using std::sqrt;
  if (!a.is_square()) throw dimension_error("lu_factor needs a square matrix");
  const std::size_t n = a.rows();
  lu_factors<R> f;
  f.row_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.row_of[i] = i;
  R max_sq(0.0);
  for (const auto& z : a.data()) {
    if (!xprec::is_finite(z)) throw domain_error("lu_factor needs finite entries");
    const R s = norm(z);
    if (s > max_sq) max_sq = s;
  }
  f.max_entry = sqrt(max_sq);
  R min_pivot_sq = xprec::infinity<R>();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    R best_sq = norm(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const R s = norm(a(i, k));
      if (s > best_sq) {
        best_sq = s;
        best = i;
      }
    }
    if (best_sq == R(0.0)) throw singular_matrix("exact zero pivot in column " + std::to_string(k));
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(best, j));
      std::swap(f.row_of[k], f.row_of[best]);
    }
    if (best_sq < min_pivot_sq) min_pivot_sq = best_sq;
    const auto pivot = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const auto l = a(i, k) / pivot;
      a(i, k) = l;
      if (l == xprec::xcomplex<R>()) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  f.min_pivot = n ? sqrt(min_pivot_sq) : R(0.0);
  f.singular_to_working_precision =
      n > 0 && f.min_pivot <= R(static_cast<double>(n) * xprec::real_traits<R>::epsilon) * f.max_entry;
  f.packed = std::move(a);
  return f;
}

/// Solves A x = b from the factors of A.
template <xprec::working_real R>
cvector<R> lu_solve(const lu_factors<R>& f, std::span<const xprec::xcomplex<R>> b) {
  const std::size_t n = f.size();
  if (b.size() != n) throw dimension_error("right-hand side length does not match the factors");
  if (f.singular_to_working_precision) throw singular_matrix("matrix is singular to working precision");
  const auto& lu = f.packed;
  cvector<R> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto acc = b[f.row_of[i]];
    for (std::size_t j = 0; j < i; ++j) acc -= lu(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    auto acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= lu(i, j) * x[j];
    x[i] = acc / lu(i, i);
  }
  return x;
}

template <xprec::working_real R>
cvector<R> lu_solve(const lu_factors<R>& f, const cvector<R>& b) {
  return lu_solve(f, std::span<const xprec::xcomplex<R>>(b));
}

/// Unit lower factor L and upper factor U, for residual checks.
template <xprec::working_real R>
std::pair<matrix<R>, matrix<R>> unpack(const lu_factors<R>& f) {
  const std::size_t n = f.size();
  matrix<R> l = matrix<R>::identity(n), u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j < i)
        l(i, j) = f.packed(i, j);
      else
        u(i, j) = f.packed(i, j);
    }
  return {l, u};
}

}  // namespace pstrack
