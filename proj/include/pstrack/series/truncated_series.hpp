#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/xprec.hpp"

namespace pstrack {

/// Complex power series c_0 + c_1 t + ... + c_d t^d with fixed degree d.
/// Terms above d are never formed.
template <xprec::working_real R>
class truncated_series {
 public:
  using real_type = R;
  using value_type = xprec::xcomplex<R>;

  truncated_series() : coeffs_(1) {}
  explicit truncated_series(std::size_t degree) : coeffs_(degree + 1) {}
  explicit truncated_series(std::vector<value_type> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw dimension_error("series needs at least one coefficient");
  }
  truncated_series(std::initializer_list<value_type> coeffs) : truncated_series(std::vector<value_type>(coeffs)) {}

  /// c + 0 t + ... + 0 t^d
  static truncated_series constant(const value_type& c, std::size_t degree) {
    truncated_series s(degree);
    s.coeffs_[0] = c;
    return s;
  }

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  value_type& operator[](std::size_t k) noexcept { return coeffs_[k]; }
  const value_type& operator[](std::size_t k) const noexcept { return coeffs_[k]; }
  std::span<value_type> coeffs() noexcept { return coeffs_; }
  std::span<const value_type> coeffs() const noexcept { return coeffs_; }

  /// Index of the last nonzero coefficient, 0 for the zero series.
  std::size_t top() const noexcept {
    for (std::size_t k = degree(); k > 0; --k)
      if (!(coeffs_[k] == value_type())) return k;
    return 0;
  }
  bool is_constant() const noexcept { return top() == 0; }

  void set_zero() { std::fill(coeffs_.begin(), coeffs_.end(), value_type()); }

  truncated_series& operator+=(const truncated_series& b) {
    check_same_degree(*this, b);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += b.coeffs_[k];
    return *this;
  }
  truncated_series& operator-=(const truncated_series& b) {
    check_same_degree(*this, b);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= b.coeffs_[k];
    return *this;
  }
  truncated_series& operator*=(const value_type& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  truncated_series& operator*=(const R& s) {
    for (auto& c : coeffs_) c = c * s;
    return *this;
  }

  friend truncated_series operator+(truncated_series a, const truncated_series& b) { return a += b; }
  friend truncated_series operator-(truncated_series a, const truncated_series& b) { return a -= b; }
  friend truncated_series operator-(truncated_series a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }
  friend truncated_series operator*(truncated_series a, const value_type& s) { return a *= s; }
  friend truncated_series operator*(const value_type& s, truncated_series a) { return a *= s; }

  /// Bitwise equality of every coefficient.
  friend bool operator==(const truncated_series& a, const truncated_series& b) { return a.coeffs_ == b.coeffs_; }

  static void check_same_degree(const truncated_series& a, const truncated_series& b) {
    if (a.degree() != b.degree())
      throw dimension_error("series degree mismatch: " + std::to_string(a.degree()) + " vs " +
                            std::to_string(b.degree()));
  }

 private:
  std::vector<value_type> coeffs_;
};

/// out_k = sum_{j<=k} a_j b_{k-j}. Coefficients of a above a_top are taken
/// as zero. out must not alias a or b.
template <xprec::working_real R>
void convolve_into(const truncated_series<R>& a, const truncated_series<R>& b, truncated_series<R>& out,
                   std::size_t a_top) {
  const std::size_t d = b.degree();
  for (std::size_t k = 0; k <= d; ++k) {
    const std::size_t jmax = std::min(k, a_top);
    xprec::xcomplex<R> acc = a[0] * b[k];
    for (std::size_t j = 1; j <= jmax; ++j) acc += a[j] * b[k - j];
    out[k] = acc;
  }
}

template <xprec::working_real R>
void convolve_into(const truncated_series<R>& a, const truncated_series<R>& b, truncated_series<R>& out) {
  truncated_series<R>::check_same_degree(a, b);
  truncated_series<R>::check_same_degree(a, out);
  convolve_into(a, b, out, a.degree());
}

/// Product truncated at the common degree.
template <xprec::working_real R>
truncated_series<R> convolve(const truncated_series<R>& a, const truncated_series<R>& b) {
  truncated_series<R>::check_same_degree(a, b);
  truncated_series<R> out(a.degree());
  convolve_into(a, b, out, a.degree());
  return out;
}

/// s(delta) by Horner's rule.
template <xprec::working_real R>
xprec::xcomplex<R> evaluate(const truncated_series<R>& s, const xprec::xcomplex<R>& delta) {
  xprec::xcomplex<R> acc = s[s.degree()];
  for (std::size_t k = s.degree(); k-- > 0;) acc = acc * delta + s[k];
  return acc;
}

/// Coefficients of s(t + delta), so that the result at t = 0 is s(delta).
/// Taylor shift by repeated synthetic division.
template <xprec::working_real R>
truncated_series<R> shift(const truncated_series<R>& s, const xprec::xcomplex<R>& delta) {
  truncated_series<R> r = s;
  if (delta == xprec::xcomplex<R>()) return r;
  const std::size_t d = r.degree();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = d; j-- > i;) r[j] += delta * r[j + 1];
  return r;
}

/// Largest |c_k| (complex modulus).
template <xprec::working_real R>
R max_abs(const truncated_series<R>& s) {
  R m(0.0);
  for (const auto& c : s.coeffs()) {
    const R a = abs(c);
    if (a > m) m = a;
  }
  return m;
}

/// Nearest-singularity estimate from the last two coefficients.
template <xprec::working_real R>
struct fabry_estimate {
  xprec::xcomplex<R> z;  ///< c_{d-1}/c_d
  R radius;              ///< |z|, +inf when the trailing coefficient is noise
  std::size_t component = 0;
  bool finite() const { return xprec::is_finite(radius); }
};

/// Relative noise floor on |c_d| below which no singularity is reported.
template <xprec::working_real R>
R default_fabry_threshold() {
  using std::sqrt;
  return sqrt(R(xprec::real_traits<R>::epsilon));
}

template <xprec::working_real R>
fabry_estimate<R> fabry_ratio(const truncated_series<R>& s, const R& threshold = default_fabry_threshold<R>()) {
  if (s.degree() < 1) throw dimension_error("fabry ratio needs degree >= 1");
  const std::size_t d = s.degree();
  const R last = abs(s[d]);
  if (last == R(0.0) || last < threshold * max_abs(s))
    return {{xprec::infinity<R>(), R(0.0)}, xprec::infinity<R>(), 0};
  const xprec::xcomplex<R> z = s[d - 1] / s[d];
  return {z, abs(z), 0};
}

/// Componentwise ratio; the component with the smallest radius wins.
template <xprec::working_real R>
fabry_estimate<R> vector_fabry(std::span<const truncated_series<R>> v,
                               const R& threshold = default_fabry_threshold<R>()) {
  if (v.empty()) throw dimension_error("vector_fabry needs at least one series");
  fabry_estimate<R> best = fabry_ratio(v[0], threshold);
  for (std::size_t i = 1; i < v.size(); ++i) {
    truncated_series<R>::check_same_degree(v[0], v[i]);
    fabry_estimate<R> e = fabry_ratio(v[i], threshold);
    if (e.radius < best.radius) {
      best = e;
      best.component = i;
    }
  }
  return best;
}

template <xprec::working_real R>
fabry_estimate<R> vector_fabry(const std::vector<truncated_series<R>>& v,
                               const R& threshold = default_fabry_threshold<R>()) {
  return vector_fabry(std::span<const truncated_series<R>>(v), threshold);
}

}  // namespace pstrack
