#pragma once

// Error-free transformations on hardware doubles. Everything in xprec is
// built from these; the compiler must not contract a*b+c into an fma in this
// file (the build adds -ffp-contract=off).

#include <cmath>
#include <utility>

namespace pstrack::xprec {

/// s = fl(a+b), e = a+b-s exactly. No precondition on magnitudes.
inline double two_sum(double a, double b, double& e) noexcept {
  const double s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
  return s;
}

/// Fast variant; requires |a| >= |b| or a == 0.
inline double quick_two_sum(double a, double b, double& e) noexcept {
  const double s = a + b;
  e = b - (s - a);
  return s;
}

inline double two_diff(double a, double b, double& e) noexcept {
  const double s = a - b;
  const double bb = s - a;
  e = (a - (s - bb)) - (b + bb);
  return s;
}

/// Veltkamp split of a into hi + lo with 26-bit halves.
inline void split(double a, double& hi, double& lo) noexcept {
  constexpr double splitter = 134217729.0;  // 2^27 + 1
  constexpr double split_threshold = 6.69692879491417e+299;  // 2^996
  if (a > split_threshold || a < -split_threshold) {
    a *= 3.7252902984619140625e-09;  // 2^-28
    const double temp = splitter * a;
    hi = temp - (temp - a);
    lo = a - hi;
    hi *= 268435456.0;  // 2^28
    lo *= 268435456.0;
  } else {
    const double temp = splitter * a;
    hi = temp - (temp - a);
    lo = a - hi;
  }
}

inline double two_prod_fma(double a, double b, double& e) noexcept {
  const double p = a * b;
  e = std::fma(a, b, -p);
  return p;
}

inline double two_prod_dekker(double a, double b, double& e) noexcept {
  double a_hi, a_lo, b_hi, b_lo;
  const double p = a * b;
  split(a, a_hi, a_lo);
  split(b, b_hi, b_lo);
  e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo;
  return p;
}

/// p = fl(a*b), e = a*b-p exactly (barring underflow of e).
inline double two_prod(double a, double b, double& e) noexcept {
#if !defined(PSTRACK_NO_FMA) && (defined(__FMA__) || defined(PSTRACK_USE_FMA))
  return two_prod_fma(a, b, e);
#else
  return two_prod_dekker(a, b, e);
#endif
}

inline double two_sqr(double a, double& e) noexcept { return two_prod(a, a, e); }

/// Puts the limbs of an expansion into canonical form: for every adjacent
/// pair fl(c[i] + c[i+1]) == c[i], zeros last. The exact sum is unchanged.
template <std::size_t N>
inline void canonicalize(double (&c)[N]) noexcept {
  if (!std::isfinite(c[0])) return;
  for (int pass = 0; pass < 4 * static_cast<int>(N); ++pass) {
    bool changed = false;
    // bottom-up sweep gathers mass into c[0]
    for (std::size_t i = N - 1; i > 0; --i) {
      double e;
      const double s = two_sum(c[i - 1], c[i], e);
      if (s != c[i - 1] || e != c[i]) changed = true;
      c[i - 1] = s;
      c[i] = e;
    }
    // top-down sweep pushes the remainders down
    for (std::size_t i = 0; i + 1 < N; ++i) {
      double e;
      const double s = two_sum(c[i], c[i + 1], e);
      if (s != c[i] || e != c[i + 1]) changed = true;
      c[i] = s;
      c[i + 1] = e;
    }
    if (!changed) break;
  }
}

}  // namespace pstrack::xprec
