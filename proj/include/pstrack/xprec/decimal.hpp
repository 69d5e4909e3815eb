#pragma once

#include <charconv>
#include <cmath>
#include <ios>
#include <string>
#include <string_view>
#include <system_error>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pstrack/errors.hpp"
#include "pstrack/xprec/eft.hpp"
#include "pstrack/xprec/real_traits.hpp"

namespace pstrack::xprec {

namespace detail {

// Wide enough to hold any finite multi-limb value exactly.
using wide_float = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<2400, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

template <working_real R>
wide_float to_wide(const R& x) {
  wide_float v = 0;
  for (int i = 0; i < real_traits<R>::limbs; ++i) v += wide_float(limb(x, i));
  return v;
}

template <working_real R>
R from_wide(wide_float v) {
  constexpr int n = real_traits<R>::limbs;
  double c[n + 1];
  for (int i = 0; i <= n; ++i) {
    c[i] = v.template convert_to<double>();
    v -= wide_float(c[i]);
  }
  canonicalize(c);
  if constexpr (n == 1)
    return c[0];
  else if constexpr (n == 2)
    return dd_real::from_limbs(c[0], c[1]);
  else
    return qd_real::from_limbs(c[0], c[1], c[2], c[3]);
}

inline bool valid_decimal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t mantissa = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++mantissa;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++mantissa;
  }
  if (mantissa == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == s.size();
}

}  // namespace detail

/// Parses a decimal literal ("-1.25e-3", "inf", "nan") to the nearest R.
template <working_real R>
R parse_real(std::string_view text) {
  if (text == "inf" || text == "+inf") return infinity<R>();
  if (text == "-inf") return -infinity<R>();
  if (text == "nan") return R(std::numeric_limits<double>::quiet_NaN());
  if (!detail::valid_decimal(text)) throw domain_error("malformed number '" + std::string(text) + "'");
  if constexpr (real_traits<R>::limbs == 1) {
    double v = 0.0;
    const char* first = text.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (ec == std::errc::result_out_of_range) return std::signbit(v) || text.front() == '-' ? -HUGE_VAL : HUGE_VAL;
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw domain_error("malformed number '" + std::string(text) + "'");
    return v;
  } else {
    return detail::from_wide<R>(detail::wide_float(std::string(text)));
  }
}

/// Decimal text with the given number of significant digits.
template <working_real R>
std::string format_real(const R& x, int digits) {
  if (!is_finite(x)) {
    const double h = limb(x, 0);
    return std::isnan(h) ? "nan" : (h < 0 ? "-inf" : "inf");
  }
  return detail::to_wide(x).str(digits, std::ios_base::scientific);
}

/// Shortest decimal text that parses back to exactly x, with at least
/// real_traits<R>::min_decimal_digits significant digits for the
/// multi-limb types.
template <working_real R>
std::string to_string(const R& x) {
  if constexpr (real_traits<R>::limbs == 1) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
  } else {
    if (!is_finite(x)) return format_real(x, 1);
    constexpr int max_digits = 800;
    std::string s;
    for (int digits = real_traits<R>::min_decimal_digits; digits <= max_digits; digits += 2) {
      s = format_real(x, digits);
      if (parse_real<R>(s) == x) return s;
    }
    return s;
  }
}

}  // namespace pstrack::xprec
