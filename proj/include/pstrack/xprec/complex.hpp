#pragma once

#include <cmath>

#include "pstrack/errors.hpp"
#include "pstrack/xprec/real_traits.hpp"

namespace pstrack::xprec {

/// Complex number over any working real. std::complex is unspecified for
/// non-builtin types, hence this small replacement.
template <working_real R>
struct xcomplex {
  R re{};
  R im{};

  constexpr xcomplex() = default;
  constexpr xcomplex(R r) : re(r), im(0.0) {}  // NOLINT
  constexpr xcomplex(R r, R i) : re(r), im(i) {}
  template <working_real S>
    requires(!std::same_as<S, R> && std::convertible_to<S, R>)
  explicit xcomplex(const xcomplex<S>& z) : re(z.re), im(z.im) {}

  xcomplex operator-() const { return {-re, -im}; }

  friend xcomplex operator+(const xcomplex& a, const xcomplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend xcomplex operator-(const xcomplex& a, const xcomplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend xcomplex operator*(const xcomplex& a, const xcomplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend xcomplex operator*(const xcomplex& a, const R& s) { return {a.re * s, a.im * s}; }
  friend xcomplex operator*(const R& s, const xcomplex& a) { return {a.re * s, a.im * s}; }

  /// Smith's algorithm; scales by the larger component of the divisor.
  friend xcomplex operator/(const xcomplex& a, const xcomplex& b) {
    using std::abs;
    if (b.re == R(0.0) && b.im == R(0.0)) throw domain_error("complex division by zero");
    if (abs(b.re) >= abs(b.im)) {
      const R r = b.im / b.re;
      const R den = b.re + b.im * r;
      return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
    }
    const R r = b.re / b.im;
    const R den = b.re * r + b.im;
    return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
  }
  friend xcomplex operator/(const xcomplex& a, const R& s) { return {a.re / s, a.im / s}; }

  xcomplex& operator+=(const xcomplex& b) { return *this = *this + b; }
  xcomplex& operator-=(const xcomplex& b) { return *this = *this - b; }
  xcomplex& operator*=(const xcomplex& b) { return *this = *this * b; }
  xcomplex& operator/=(const xcomplex& b) { return *this = *this / b; }

  /// Bitwise on both parts.
  friend bool operator==(const xcomplex& a, const xcomplex& b) { return a.re == b.re && a.im == b.im; }
};

template <working_real R>
xcomplex<R> conj(const xcomplex<R>& z) {
  return {z.re, -z.im};
}

/// |z|^2
template <working_real R>
R norm(const xcomplex<R>& z) {
  return z.re * z.re + z.im * z.im;
}

template <working_real R>
R abs(const xcomplex<R>& z) {
  using std::abs;
  using std::sqrt;
  const R a = abs(z.re);
  const R b = abs(z.im);
  if (a == R(0.0)) return b;
  if (b == R(0.0)) return a;
  // scale to avoid overflow in the squares
  if (a >= b) {
    const R r = b / a;
    return a * sqrt(R(1.0) + r * r);
  }
  const R r = a / b;
  return b * sqrt(R(1.0) + r * r);
}

/// max(|re|, |im|); cheap magnitude for pivoting and max-norms.
template <working_real R>
R abs1(const xcomplex<R>& z) {
  using std::abs;
  const R a = abs(z.re);
  const R b = abs(z.im);
  return a >= b ? a : b;
}

template <working_real R>
bool is_finite(const xcomplex<R>& z) {
  return is_finite(z.re) && is_finite(z.im);
}

}  // namespace pstrack::xprec
