#pragma once

// Quad-double numbers: four doubles in decreasing magnitude whose exact sum
// is the value. Every operation ends in canonicalize(), so adjacent limbs
// satisfy fl(c[i] + c[i+1]) == c[i].

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>

#include "pstrack/errors.hpp"
#include "pstrack/xprec/dd_real.hpp"
#include "pstrack/xprec/eft.hpp"

namespace pstrack::xprec {

class qd_real {
 public:
  constexpr qd_real() noexcept = default;
  constexpr qd_real(double x) noexcept : limbs_{x, 0.0, 0.0, 0.0} {}  // NOLINT
  qd_real(const dd_real& x) noexcept : limbs_{x.hi(), x.lo(), 0.0, 0.0} {}  // NOLINT
  qd_real(double c0, double c1, double c2, double c3) noexcept : limbs_{c0, c1, c2, c3} {
    canonicalize(limbs_);
  }

  static constexpr int limb_count = 4;
  /// Unit roundoff 2^-212.
  static constexpr double epsilon() noexcept { return 1.5192908393215678e-64; }

  static qd_real from_limbs(double c0, double c1, double c2, double c3) noexcept {
    qd_real r;
    r.limbs_[0] = c0;
    r.limbs_[1] = c1;
    r.limbs_[2] = c2;
    r.limbs_[3] = c3;
    return r;
  }
  static qd_real infinity() noexcept { return qd_real(std::numeric_limits<double>::infinity()); }
  static qd_real quiet_nan() noexcept { return qd_real(std::numeric_limits<double>::quiet_NaN()); }

  double operator[](int i) const noexcept { return limbs_[i]; }
  explicit operator double() const noexcept { return limbs_[0] + limbs_[1]; }
  double to_double() const noexcept { return limbs_[0] + limbs_[1]; }
  dd_real to_dd() const noexcept { return dd_real(limbs_[0], limbs_[1]); }

  qd_real operator-() const noexcept {
    return from_limbs(-limbs_[0], -limbs_[1], -limbs_[2], -limbs_[3]);
  }

  friend qd_real operator+(const qd_real& a, const qd_real& b) noexcept {
    if (!std::isfinite(a.limbs_[0]) || !std::isfinite(b.limbs_[0]))
      return qd_real(a.limbs_[0] + b.limbs_[0]);
    // Merge both expansions by decreasing magnitude, then renormalize the
    // eight terms exactly and keep the leading four.
    double c[8];
    int i = 0, j = 0;
    for (int k = 0; k < 8; ++k) {
      if (j >= 4 || (i < 4 && std::abs(a.limbs_[i]) >= std::abs(b.limbs_[j])))
        c[k] = a.limbs_[i++];
      else
        c[k] = b.limbs_[j++];
    }
    return from_expansion(c);
  }
  friend qd_real operator-(const qd_real& a, const qd_real& b) noexcept { return a + (-b); }

  friend qd_real operator*(const qd_real& a, const qd_real& b) noexcept {
    if (!std::isfinite(a.limbs_[0]) || !std::isfinite(b.limbs_[0]))
      return qd_real(a.limbs_[0] * b.limbs_[0]);
    const double* x = a.limbs_;
    const double* y = b.limbs_;
    double q0, q1, q2, q3, q4, q5, q6, q7, q8, q9;
    double t0, t1, r0, r1;

    double p0 = two_prod(x[0], y[0], q0);
    double p1 = two_prod(x[0], y[1], q1);
    double p2 = two_prod(x[1], y[0], q2);
    double p3 = two_prod(x[0], y[2], q3);
    double p4 = two_prod(x[1], y[1], q4);
    double p5 = two_prod(x[2], y[0], q5);

    three_sum(p1, p2, q0);

    // (p2, q1, q2) + (p3, p4, p5) -> (s0, s1, s2)
    three_sum(p2, q1, q2);
    three_sum(p3, p4, p5);
    double s0 = two_sum(p2, p3, t0);
    double s1 = two_sum(q1, p4, t1);
    double s2 = q2 + p5;
    s1 = two_sum(s1, t0, t0);
    s2 += (t0 + t1);

    // third-order terms
    double p6 = two_prod(x[0], y[3], q6);
    double p7 = two_prod(x[1], y[2], q7);
    double p8 = two_prod(x[2], y[1], q8);
    double p9 = two_prod(x[3], y[0], q9);

    q0 = two_sum(q0, q3, q3);
    q4 = two_sum(q4, q5, q5);
    p6 = two_sum(p6, p7, p7);
    p8 = two_sum(p8, p9, p9);
    t0 = two_sum(q0, q4, t1);
    t1 += (q3 + q5);
    r0 = two_sum(p6, p8, r1);
    r1 += (p7 + p9);
    q3 = two_sum(t0, r0, q4);
    q4 += (t1 + r1);
    t0 = two_sum(q3, s1, t1);
    t1 += q4;

    // fourth-order terms
    t1 += x[1] * y[3] + x[2] * y[2] + x[3] * y[1] + q6 + q7 + q8 + q9 + s2;

    double c[5] = {p0, p1, s0, t0, t1};
    return from_expansion(c);
  }
  friend qd_real operator*(const qd_real& a, double b) noexcept {
    if (!std::isfinite(a.limbs_[0]) || !std::isfinite(b)) return qd_real(a.limbs_[0] * b);
    double c[8];
    for (int i = 0; i < 4; ++i) c[2 * i] = two_prod(a.limbs_[i], b, c[2 * i + 1]);
    // c is ordered by significance only approximately; canonicalize copes.
    return from_expansion(c);
  }
  friend qd_real operator*(double a, const qd_real& b) noexcept { return b * a; }

  friend qd_real operator/(const qd_real& a, const qd_real& b) {
    if (b.limbs_[0] == 0.0) throw domain_error("quad-double division by zero");
    const double d = b.limbs_[0];
    double q[5];
    q[0] = a.limbs_[0] / d;
    qd_real r = a - b * q[0];
    for (int k = 1; k < 5; ++k) {
      q[k] = r.limbs_[0] / d;
      if (k < 4) r = r - b * q[k];
    }
    return from_expansion(q);
  }

  qd_real& operator+=(const qd_real& b) noexcept { return *this = *this + b; }
  qd_real& operator-=(const qd_real& b) noexcept { return *this = *this - b; }
  qd_real& operator*=(const qd_real& b) noexcept { return *this = *this * b; }
  qd_real& operator/=(const qd_real& b) { return *this = *this / b; }

  friend bool operator==(const qd_real& a, const qd_real& b) noexcept {
    return a.limbs_[0] == b.limbs_[0] && a.limbs_[1] == b.limbs_[1] &&
           a.limbs_[2] == b.limbs_[2] && a.limbs_[3] == b.limbs_[3];
  }
  friend std::partial_ordering operator<=>(const qd_real& a, const qd_real& b) noexcept {
    for (int i = 0; i < 4; ++i)
      if (auto c = a.limbs_[i] <=> b.limbs_[i]; c != 0) return c;
    return std::partial_ordering::equivalent;
  }

  friend qd_real ldexp(const qd_real& a, int e) noexcept {
    return from_limbs(std::ldexp(a.limbs_[0], e), std::ldexp(a.limbs_[1], e),
                      std::ldexp(a.limbs_[2], e), std::ldexp(a.limbs_[3], e));
  }
  friend qd_real abs(const qd_real& a) noexcept { return a.limbs_[0] < 0.0 ? -a : a; }
  friend qd_real sqr(const qd_real& a) noexcept { return a * a; }
  friend qd_real sqrt(const qd_real& a) {
    if (a.limbs_[0] == 0.0) return qd_real();
    if (a.limbs_[0] < 0.0) throw domain_error("quad-double sqrt of a negative number");
    if (std::isinf(a.limbs_[0]) || std::isnan(a.limbs_[0])) return a;
    // Newton on 1/sqrt(a), then one correction of the square root itself.
    qd_real r(1.0 / std::sqrt(a.limbs_[0]));
    const qd_real h = ldexp(a, -1);
    for (int k = 0; k < 3; ++k) r += (qd_real(0.5) - h * sqr(r)) * r;
    r = r * a;
    r += (a - sqr(r)).limbs_[0] * (0.5 / r.limbs_[0]);
    return r;
  }
  friend bool isfinite(const qd_real& a) noexcept { return std::isfinite(a.limbs_[0]); }
  friend bool isnan(const qd_real& a) noexcept { return std::isnan(a.limbs_[0]); }
  friend bool isinf(const qd_real& a) noexcept { return std::isinf(a.limbs_[0]); }
  friend bool signbit(const qd_real& a) noexcept { return std::signbit(a.limbs_[0]); }

 private:
  static void three_sum(double& a, double& b, double& c) noexcept {
    double t2, t3;
    const double t1 = two_sum(a, b, t2);
    a = two_sum(c, t1, t3);
    b = two_sum(t2, t3, c);
  }

  template <std::size_t N>
  static qd_real from_expansion(double (&c)[N]) noexcept {
    canonicalize(c);
    qd_real r;
    for (std::size_t i = 0; i < 4 && i < N; ++i) r.limbs_[i] = c[i];
    if (!std::isfinite(r.limbs_[0])) r.limbs_[1] = r.limbs_[2] = r.limbs_[3] = 0.0;
    return r;
  }

  double limbs_[4] = {0.0, 0.0, 0.0, 0.0};
};

}  // namespace pstrack::xprec
