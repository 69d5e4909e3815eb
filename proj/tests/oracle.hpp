#pragma once

// Independent 512-bit reference arithmetic for the tests.

#include <cmath>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pstrack/xprec.hpp"

namespace oracle {

using big = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<512, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

template <class R>
big to_big(const R& x) {
  big v = 0;
  for (int i = 0; i < pstrack::xprec::real_traits<R>::limbs; ++i) v += big(pstrack::xprec::limb(x, i));
  return v;
}

struct big_complex {
  big re = 0;
  big im = 0;
};

template <class R>
big_complex to_big(const pstrack::xprec::xcomplex<R>& z) {
  return {to_big(z.re), to_big(z.im)};
}

inline big_complex operator*(const big_complex& a, const big_complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline big_complex operator+(const big_complex& a, const big_complex& b) { return {a.re + b.re, a.im + b.im}; }
inline big_complex operator-(const big_complex& a, const big_complex& b) { return {a.re - b.re, a.im - b.im}; }
inline big abs(const big_complex& z) { return boost::multiprecision::sqrt(z.re * z.re + z.im * z.im); }
inline big_complex conj(const big_complex& z) { return {z.re, -z.im}; }
inline big_complex operator/(const big_complex& a, const big_complex& b) {
  const big d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

/// Dense row-major square system solved by Gaussian elimination at 512 bits.
inline std::vector<big_complex> solve(std::vector<big_complex> a, std::vector<big_complex> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(a[i * n + k]) > abs(a[best * n + k])) best = i;
    for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[best * n + j]);
    std::swap(b[k], b[best]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const big_complex l = a[i * n + k] / a[k * n + k];
      for (std::size_t j = k; j < n; ++j) a[i * n + j] = a[i * n + j] - l * a[k * n + j];
      b[i] = b[i] - l * b[k];
    }
  }
  std::vector<big_complex> x(n);
  for (std::size_t i = n; i-- > 0;) {
    big_complex acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc = acc - a[i * n + j] * x[j];
    x[i] = acc / a[i * n + i];
  }
  return x;
}

/// |computed - exact| / |exact| as a double (absolute error when exact is zero).
template <class R>
double rel_err(const R& computed, const big& exact) {
  const big diff = boost::multiprecision::abs(to_big(computed) - exact);
  if (exact == 0) return diff.convert_to<double>();
  return (diff / boost::multiprecision::abs(exact)).convert_to<double>();
}

template <class R>
double rel_err(const pstrack::xprec::xcomplex<R>& computed, const big_complex& exact) {
  const big_complex c = to_big(computed);
  const big diff = abs(c - exact);
  const big den = abs(exact);
  if (den == 0) return diff.convert_to<double>();
  return (diff / den).convert_to<double>();
}

/// Rounds a wide value to R limb by limb.
template <class R>
R from_big(big v) {
  constexpr int n = pstrack::xprec::real_traits<R>::limbs;
  double c[n + 1];
  for (int i = 0; i <= n; ++i) {
    c[i] = v.convert_to<double>();
    v -= big(c[i]);
  }
  pstrack::xprec::canonicalize(c);
  if constexpr (n == 1)
    return c[0];
  else if constexpr (n == 2)
    return pstrack::xprec::dd_real::from_limbs(c[0], c[1]);
  else
    return pstrack::xprec::qd_real::from_limbs(c[0], c[1], c[2], c[3]);
}

/// Random R with a full-length mantissa, magnitude about 2^[-exp_range, exp_range].
template <class R>
R random_real(std::mt19937_64& gen, int exp_range = 20) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-exp_range, exp_range);
  big v = 0;
  big scale = 1;
  for (int i = 0; i < 6; ++i) {
    v += big(u(gen)) * scale;
    scale = ldexp(scale, -53);
  }
  return from_big<R>(ldexp(v, e(gen)));
}

template <class R>
pstrack::xprec::xcomplex<R> random_complex(std::mt19937_64& gen, int exp_range = 0) {
  return {random_real<R>(gen, exp_range), random_real<R>(gen, exp_range)};
}

template <class R>
bool is_canonical(const R& x) {
  constexpr int n = pstrack::xprec::real_traits<R>::limbs;
  for (int i = 0; i + 1 < n; ++i) {
    const double a = pstrack::xprec::limb(x, i);
    const double b = pstrack::xprec::limb(x, i + 1);
    if (a + b != a) return false;
  }
  return true;
}

}  // namespace oracle
