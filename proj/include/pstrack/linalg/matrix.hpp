#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/xprec.hpp"

namespace pstrack {

template <xprec::working_real R>
using cvector = std::vector<xprec::xcomplex<R>>;

/// Dense row-major complex matrix.
template <xprec::working_real R>
class matrix {
 public:
  using value_type = xprec::xcomplex<R>;

  matrix() = default;
  matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static matrix identity(std::size_t n) {
    matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = value_type(R(1.0));
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  value_type& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<value_type> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const value_type> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const value_type> data() const noexcept { return data_; }

  friend bool operator==(const matrix&, const matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

template <xprec::working_real R>
matrix<R> operator*(const matrix<R>& a, const matrix<R>& b) {
  if (a.cols() != b.rows()) throw dimension_error("matrix product shape mismatch");
  matrix<R> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <xprec::working_real R>
cvector<R> operator*(const matrix<R>& a, std::span<const xprec::xcomplex<R>> x) {
  if (a.cols() != x.size()) throw dimension_error("matrix-vector shape mismatch");
  cvector<R> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    xprec::xcomplex<R> acc;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

template <xprec::working_real R>
cvector<R> operator*(const matrix<R>& a, const cvector<R>& x) {
  return a * std::span<const xprec::xcomplex<R>>(x);
}

/// Conjugate transpose.
template <xprec::working_real R>
matrix<R> adjoint(const matrix<R>& a) {
  matrix<R> h(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(j, i) = conj(a(i, j));
  return h;
}

/// Euclidean norm.
template <xprec::working_real R>
R norm2(std::span<const xprec::xcomplex<R>> x) {
  using std::sqrt;
  R s(0.0);
  for (const auto& z : x) s += norm(z);
  return sqrt(s);
}

template <xprec::working_real R>
R norm2(const cvector<R>& x) {
  return norm2(std::span<const xprec::xcomplex<R>>(x));
}

/// max_i |x_i|
template <xprec::working_real R>
R max_norm(std::span<const xprec::xcomplex<R>> x) {
  R m(0.0);
  for (const auto& z : x) {
    const R a = abs(z);
    if (a > m) m = a;
  }
  return m;
}

template <xprec::working_real R>
R frobenius_norm(const matrix<R>& a) {
  return norm2(a.data());
}

}  // namespace pstrack
