#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <string_view>

#include "pstrack/xprec/dd_real.hpp"
#include "pstrack/xprec/qd_real.hpp"

namespace pstrack::xprec {

/// Working precision of a run.
enum class precision { d, dd, qd };

template <class R>
struct real_traits;

template <>
struct real_traits<double> {
  static constexpr precision level = precision::d;
  static constexpr std::string_view name = "d";
  static constexpr int limbs = 1;
  /// Unit roundoff 2^-53.
  static constexpr double epsilon = 1.1102230246251565e-16;
  static constexpr int min_decimal_digits = 17;
  static constexpr double default_min_step = 1e-8;
};

template <>
struct real_traits<dd_real> {
  static constexpr precision level = precision::dd;
  static constexpr std::string_view name = "dd";
  static constexpr int limbs = 2;
  static constexpr double epsilon = dd_real::epsilon();
  static constexpr int min_decimal_digits = 32;
  static constexpr double default_min_step = 1e-16;
};

template <>
struct real_traits<qd_real> {
  static constexpr precision level = precision::qd;
  static constexpr std::string_view name = "qd";
  static constexpr int limbs = 4;
  static constexpr double epsilon = qd_real::epsilon();
  static constexpr int min_decimal_digits = 64;
  static constexpr double default_min_step = 1e-32;
};

template <class R>
concept working_real = requires { real_traits<R>::level; };

template <working_real R>
constexpr double epsilon_of() noexcept {
  return real_traits<R>::epsilon;
}

inline double to_double(double x) noexcept { return x; }
inline double to_double(const dd_real& x) noexcept { return x.to_double(); }
inline double to_double(const qd_real& x) noexcept { return x.to_double(); }

template <working_real R>
R infinity() noexcept {
  if constexpr (std::same_as<R, double>)
    return std::numeric_limits<double>::infinity();
  else
    return R::infinity();
}

/// Limb i of x (limb 0 for plain doubles).
inline double limb(double x, int i) noexcept { return i == 0 ? x : 0.0; }
inline double limb(const dd_real& x, int i) noexcept { return x[i]; }
inline double limb(const qd_real& x, int i) noexcept { return x[i]; }

inline bool is_finite(double x) noexcept { return std::isfinite(x); }
inline bool is_finite(const dd_real& x) noexcept { return isfinite(x); }
inline bool is_finite(const qd_real& x) noexcept { return isfinite(x); }
inline bool is_inf(double x) noexcept { return std::isinf(x); }
inline bool is_inf(const dd_real& x) noexcept { return isinf(x); }
inline bool is_inf(const qd_real& x) noexcept { return isinf(x); }

/// Rounds to the nearest value of R (exact when R is at least as wide).
template <working_real R>
R narrow(const qd_real& x) noexcept {
  if constexpr (std::same_as<R, double>)
    return x.to_double();
  else if constexpr (std::same_as<R, dd_real>)
    return x.to_dd();
  else
    return x;
}

}  // namespace pstrack::xprec
