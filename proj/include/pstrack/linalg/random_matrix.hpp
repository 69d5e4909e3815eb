#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pstrack/linalg/matrix.hpp"
#include "pstrack/random.hpp"

namespace pstrack {

/// Entries with both parts uniform in [-1, 1).
template <xprec::working_real R>
matrix<R> random_matrix(std::size_t rows, std::size_t cols, random_source& rng) {
  matrix<R> a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = rng.in_square<R>();
  return a;
}

/// Unitary matrix from modified Gram-Schmidt (applied twice) on the columns
/// of a random matrix.
template <xprec::working_real R>
matrix<R> random_unitary(std::size_t n, random_source& rng) {
  using std::sqrt;
  using C = xprec::xcomplex<R>;
  matrix<R> a = random_matrix<R>(n, n, rng);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        C dot;
        for (std::size_t i = 0; i < n; ++i) dot += conj(a(i, k)) * a(i, j);
        for (std::size_t i = 0; i < n; ++i) a(i, j) -= dot * a(i, k);
      }
      R s(0.0);
      for (std::size_t i = 0; i < n; ++i) s += norm(a(i, j));
      const R len = sqrt(s);
      for (std::size_t i = 0; i < n; ++i) a(i, j) = a(i, j) / len;
    }
  }
  return a;
}

}  // namespace pstrack
