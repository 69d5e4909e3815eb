#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "pstrack/xprec/complex.hpp"

namespace pstrack {

/// Seeded generator used by every randomized construction in the library.
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; the conversions below are spelled out so that results do not
/// depend on the standard library's distribution implementations.
class random_source {
 public:
  explicit random_source(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

  /// Point on the complex unit circle at a uniform angle.
  template <xprec::working_real R>
  xprec::xcomplex<R> unit_circle() {
    const double angle = 2.0 * std::numbers::pi * uniform01();
    return {R(std::cos(angle)), R(std::sin(angle))};
  }

  /// Both parts uniform on [-1, 1).
  template <xprec::working_real R>
  xprec::xcomplex<R> in_square() {
    const double re = uniform(-1.0, 1.0);
    const double im = uniform(-1.0, 1.0);
    return {R(re), R(im)};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pstrack
