#pragma once

// Reverse-mode differentiation of a product x_0 x_1 ... x_{m-1}.
//
// forward:  f_k = x_0 ... x_{k+1}              (m-1 multiplications)
// backward: b_k = x_{m-1} ... x_{m-2-k}        (m-2 multiplications)
// cross:    d/dx_k = f_{k-2} * b_{m-3-k}       (m-2 multiplications)
//
// d/dx_{m-1} is f_{m-3} and d/dx_0 is b_{m-3}; 3m-5 multiplications in all.
// The element type T is anything with a multiplication functor
// mul(a, b, out) that writes a*b into out (out never aliases a or b).

#include <cstddef>
#include <span>
#include <vector>

#include "pstrack/errors.hpp"

namespace pstrack {

template <class T>
struct product_buffers {
  std::vector<T> forward;
  std::vector<T> backward;
  T left;
  T scratch;

  void reserve(std::size_t m, const T& prototype) {
    if (forward.size() < m) forward.resize(m, prototype);
    if (backward.size() < m) backward.resize(m, prototype);
    left = prototype;
    scratch = prototype;
  }
};

/// value = prod x, grad[k] = prod_{j != k} x_j. Returns the number of
/// multiplications used. Buffers must hold at least m elements.
template <class T, class Mul>
std::size_t product_gradient(std::span<const T* const> x, T& value, std::span<T> grad, product_buffers<T>& buf,
                             const T& one, Mul&& mul) {
  const std::size_t m = x.size();
  if (m == 0) throw dimension_error("product of no factors");
  if (grad.size() < m) throw dimension_error("gradient buffer too small");
  if (m == 1) {
    value = *x[0];
    grad[0] = one;
    return 0;
  }
  if (m == 2) {
    mul(*x[0], *x[1], value);
    grad[0] = *x[1];
    grad[1] = *x[0];
    return 1;
  }
  auto& f = buf.forward;
  auto& b = buf.backward;
  mul(*x[0], *x[1], f[0]);
  for (std::size_t k = 1; k + 1 < m; ++k) mul(f[k - 1], *x[k + 1], f[k]);
  value = f[m - 2];
  mul(*x[m - 1], *x[m - 2], b[0]);
  for (std::size_t k = 1; k + 2 < m; ++k) mul(b[k - 1], *x[m - 2 - k], b[k]);
  grad[m - 1] = f[m - 3];
  grad[0] = b[m - 3];
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const T& left = k == 1 ? *x[0] : f[k - 2];
    const T& right = k + 2 == m ? *x[m - 1] : b[m - 3 - k];
    mul(left, right, grad[k]);
  }
  return 3 * m - 5;
}

/// Off-diagonal second derivatives of the product, for a < b:
/// store(a, b, prod_{j != a, b} x_j). Row a keeps a running left product
/// L = x_0 ... x_{a-1} x_{a+1} ... x_{b-1} and pairs it with the stored
/// backward product x_{b+1} ... x_{m-1}, so each entry costs at most two
/// multiplications. product_gradient must have filled buf for the same x.
/// Returns the number of multiplications.
template <class T, class Mul, class Store>
std::size_t product_hessian(std::span<const T* const> x, product_buffers<T>& buf, const T& one, Mul&& mul,
                            Store&& store) {
  const std::size_t m = x.size();
  if (m < 2) return 0;
  const auto& f = buf.forward;
  const auto& bw = buf.backward;
  // x_0 ... x_{a-1}
  auto prefix = [&](std::size_t a) -> const T* {
    if (a == 0) return nullptr;
    if (a == 1) return x[0];
    return &f[a - 2];
  };
  // x_s ... x_{m-1}
  auto suffix = [&](std::size_t s) -> const T* {
    if (s >= m) return nullptr;
    if (s + 1 == m) return x[m - 1];
    return &bw[m - 2 - s];
  };
  std::size_t count = 0;
  T* running = &buf.left;
  T* spare = &buf.scratch;
  for (std::size_t a = 0; a + 1 < m; ++a) {
    const T* left = prefix(a);
    for (std::size_t b = a + 1; b < m; ++b) {
      if (b > a + 1) {
        if (left) {
          mul(*left, *x[b - 1], *spare);
          ++count;
          std::swap(running, spare);
          left = running;
        } else {
          left = x[b - 1];
        }
      }
      const T* right = suffix(b + 1);
      if (left && right) {
        mul(*left, *right, *spare);
        ++count;
        store(a, b, *spare);
      } else if (left) {
        store(a, b, *left);
      } else if (right) {
        store(a, b, *right);
      } else {
        store(a, b, one);
      }
    }
  }
  return count;
}

}  // namespace pstrack
