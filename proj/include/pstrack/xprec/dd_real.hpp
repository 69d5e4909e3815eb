#pragma once

// Double-double numbers: an unevaluated sum hi + lo of two doubles with
// |lo| <= ulp(hi)/2. Algorithms follow the QD library of Hida, Li and Bailey.

#include <cmath>
#include <compare>
#include <limits>

#include "pstrack/errors.hpp"
#include "pstrack/xprec/eft.hpp"

namespace pstrack::xprec {

class dd_real {
 public:
  constexpr dd_real() noexcept = default;
  constexpr dd_real(double hi) noexcept : limbs_{hi, 0.0} {}  // NOLINT
  /// Normalizes (hi, lo).
  dd_real(double hi, double lo) noexcept {
    if (!std::isfinite(hi)) {
      limbs_[0] = hi;
      return;
    }
    limbs_[0] = two_sum(hi, lo, limbs_[1]);
  }

  static constexpr int limb_count = 2;
  /// Unit roundoff 2^-106.
  static constexpr double epsilon() noexcept { return 1.2325951644078309e-32; }

  static dd_real from_limbs(double hi, double lo) noexcept {
    dd_real r;
    r.limbs_[0] = hi;
    r.limbs_[1] = lo;
    return r;
  }
  static dd_real infinity() noexcept {
    return from_limbs(std::numeric_limits<double>::infinity(), 0.0);
  }
  static dd_real quiet_nan() noexcept {
    return from_limbs(std::numeric_limits<double>::quiet_NaN(), 0.0);
  }

  double operator[](int i) const noexcept { return limbs_[i]; }
  double hi() const noexcept { return limbs_[0]; }
  double lo() const noexcept { return limbs_[1]; }
  explicit operator double() const noexcept { return limbs_[0] + limbs_[1]; }
  double to_double() const noexcept { return limbs_[0] + limbs_[1]; }

  dd_real operator-() const noexcept { return from_limbs(-limbs_[0], -limbs_[1]); }

  friend dd_real operator+(const dd_real& a, const dd_real& b) noexcept {
    if (!std::isfinite(a.limbs_[0] + b.limbs_[0])) return from_limbs(a.limbs_[0] + b.limbs_[0], 0.0);
    double s2, t2;
    double s1 = two_sum(a.limbs_[0], b.limbs_[0], s2);
    const double t1 = two_sum(a.limbs_[1], b.limbs_[1], t2);
    s2 += t1;
    s1 = quick_two_sum(s1, s2, s2);
    s2 += t2;
    s1 = quick_two_sum(s1, s2, s2);
    return finish(s1, s2);
  }
  friend dd_real operator+(const dd_real& a, double b) noexcept {
    if (!std::isfinite(a.limbs_[0] + b)) return from_limbs(a.limbs_[0] + b, 0.0);
    double s2;
    double s1 = two_sum(a.limbs_[0], b, s2);
    s2 += a.limbs_[1];
    s1 = quick_two_sum(s1, s2, s2);
    return finish(s1, s2);
  }
  friend dd_real operator+(double a, const dd_real& b) noexcept { return b + a; }
  friend dd_real operator-(const dd_real& a, const dd_real& b) noexcept { return a + (-b); }
  friend dd_real operator-(const dd_real& a, double b) noexcept { return a + (-b); }
  friend dd_real operator-(double a, const dd_real& b) noexcept { return (-b) + a; }

  friend dd_real operator*(const dd_real& a, const dd_real& b) noexcept {
    if (!std::isfinite(a.limbs_[0] * b.limbs_[0])) return from_limbs(a.limbs_[0] * b.limbs_[0], 0.0);
    double p2;
    double p1 = two_prod(a.limbs_[0], b.limbs_[0], p2);
    p2 += (a.limbs_[0] * b.limbs_[1] + a.limbs_[1] * b.limbs_[0]);
    p1 = quick_two_sum(p1, p2, p2);
    return finish(p1, p2);
  }
  friend dd_real operator*(const dd_real& a, double b) noexcept {
    if (!std::isfinite(a.limbs_[0] * b)) return from_limbs(a.limbs_[0] * b, 0.0);
    double p2;
    double p1 = two_prod(a.limbs_[0], b, p2);
    p2 += a.limbs_[1] * b;
    p1 = quick_two_sum(p1, p2, p2);
    return finish(p1, p2);
  }
  friend dd_real operator*(double a, const dd_real& b) noexcept { return b * a; }

  friend dd_real operator/(const dd_real& a, const dd_real& b) {
    if (b.limbs_[0] == 0.0) throw domain_error("double-double division by zero");
    const double q1 = a.limbs_[0] / b.limbs_[0];
    dd_real r = a - b * q1;
    const double q2 = r.limbs_[0] / b.limbs_[0];
    r = r - b * q2;
    const double q3 = r.limbs_[0] / b.limbs_[0];
    double e;
    const double s = quick_two_sum(q1, q2, e);
    return dd_real::from_limbs(s, e) + q3;
  }
  friend dd_real operator/(const dd_real& a, double b) { return a / dd_real(b); }
  friend dd_real operator/(double a, const dd_real& b) { return dd_real(a) / b; }

  dd_real& operator+=(const dd_real& b) noexcept { return *this = *this + b; }
  dd_real& operator-=(const dd_real& b) noexcept { return *this = *this - b; }
  dd_real& operator*=(const dd_real& b) noexcept { return *this = *this * b; }
  dd_real& operator/=(const dd_real& b) { return *this = *this / b; }

  friend bool operator==(const dd_real& a, const dd_real& b) noexcept {
    return a.limbs_[0] == b.limbs_[0] && a.limbs_[1] == b.limbs_[1];
  }
  friend std::partial_ordering operator<=>(const dd_real& a, const dd_real& b) noexcept {
    if (auto c = a.limbs_[0] <=> b.limbs_[0]; c != 0) return c;
    return a.limbs_[1] <=> b.limbs_[1];
  }

  /// Exact scaling by a power of two.
  friend dd_real ldexp(const dd_real& a, int e) noexcept {
    return from_limbs(std::ldexp(a.limbs_[0], e), std::ldexp(a.limbs_[1], e));
  }
  friend dd_real abs(const dd_real& a) noexcept { return a.limbs_[0] < 0.0 ? -a : a; }
  friend dd_real sqr(const dd_real& a) noexcept {
    double p2;
    double p1 = two_sqr(a.limbs_[0], p2);
    p2 += 2.0 * a.limbs_[0] * a.limbs_[1];
    p2 += a.limbs_[1] * a.limbs_[1];
    p1 = quick_two_sum(p1, p2, p2);
    return finish(p1, p2);
  }
  friend dd_real sqrt(const dd_real& a) {
    if (a.limbs_[0] == 0.0) return dd_real();
    if (a.limbs_[0] < 0.0) throw domain_error("double-double sqrt of a negative number");
    if (std::isinf(a.limbs_[0]) || std::isnan(a.limbs_[0])) return a;
    // Karp's trick followed by one Newton correction in full precision.
    const double x = 1.0 / std::sqrt(a.limbs_[0]);
    const double ax = a.limbs_[0] * x;
    dd_real r = dd_real(ax) + (a - sqr(dd_real(ax))).limbs_[0] * (x * 0.5);
    r = r + (a - sqr(r)).limbs_[0] * (0.5 / r.limbs_[0]);
    return r;
  }
  friend bool isfinite(const dd_real& a) noexcept { return std::isfinite(a.limbs_[0]); }
  friend bool isnan(const dd_real& a) noexcept { return std::isnan(a.limbs_[0]); }
  friend bool isinf(const dd_real& a) noexcept { return std::isinf(a.limbs_[0]); }
  friend bool signbit(const dd_real& a) noexcept { return std::signbit(a.limbs_[0]); }

 private:
  // Non-finite results keep only the leading limb so that inf stays inf.
  static dd_real finish(double s, double e) noexcept {
    if (!std::isfinite(s)) return from_limbs(s, 0.0);
    return from_limbs(s, e);
  }

  double limbs_[2] = {0.0, 0.0};
};

}  // namespace pstrack::xprec
