#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/polysys/system.hpp"

namespace pstrack {

/// Which powers an evaluation needs. Series evaluation needs the common
/// factors x^{e-1}; Hessians at a point also need x^{e-2} and squares.
enum class power_usage { common_factor, hessian };

/// Highest power of each variable that must be tabulated (values below 2
/// mean nothing is stored for that variable).
template <xprec::working_real R>
std::vector<std::uint32_t> power_requirements(const sparse_system<R>& sys, power_usage usage) {
  std::vector<std::uint32_t> need(sys.variables(), 0);
  for (const auto& p : sys.polynomials()) {
    for (const auto& m : p) {
      for (std::size_t k = 0; k < m.support.size(); ++k) {
        const std::uint32_t e = m.exponents[k];
        std::uint32_t top = e - 1;
        if (usage == power_usage::hessian && e >= 2) top = std::max<std::uint32_t>(top, 2);
        need[m.support[k]] = std::max(need[m.support[k]], top);
      }
    }
  }
  return need;
}

/// x_i^e for e = 2 .. max_power[i], built once by repeated multiplication
/// and read-only afterwards. T is a series or a complex number; mul(a, b,
/// out) writes a*b into out.
template <class T>
class power_table {
 public:
  template <class Mul>
  power_table(std::span<const T> x, std::span<const std::uint32_t> max_power, Mul&& mul, const T& prototype)
      : max_power_(max_power.begin(), max_power.end()), offset_(max_power.size() + 1, 0) {
    if (x.size() != max_power.size()) throw dimension_error("power table needs one maximum per variable");
    for (std::size_t i = 0; i < max_power_.size(); ++i)
      offset_[i + 1] = offset_[i] + (max_power_[i] >= 2 ? max_power_[i] - 1 : 0);
    powers_.assign(offset_.back(), prototype);
    for (std::size_t i = 0; i < max_power_.size(); ++i) {
      for (std::uint32_t e = 2; e <= max_power_[i]; ++e) {
        const T& prev = e == 2 ? x[i] : powers_[offset_[i] + e - 3];
        mul(prev, x[i], powers_[offset_[i] + e - 2]);
        ++multiplications_;
      }
    }
  }

  /// x_i^e, 2 <= e <= max_power(i).
  const T& power(std::size_t i, std::uint32_t e) const { return powers_[offset_[i] + e - 2]; }

  const T& at(std::size_t i, std::uint32_t e) const {
    if (i >= max_power_.size() || e < 2 || e > max_power_[i]) throw dimension_error("power not in table");
    return power(i, e);
  }

  std::uint32_t max_power(std::size_t i) const { return max_power_[i]; }
  std::size_t variables() const noexcept { return max_power_.size(); }
  std::size_t multiplications() const noexcept { return multiplications_; }

 private:
  std::vector<std::uint32_t> max_power_;
  std::vector<std::size_t> offset_;
  std::vector<T> powers_;
  std::size_t multiplications_ = 0;
};

}  // namespace pstrack
