#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pstrack/blocksolve/solver.hpp"
#include "pstrack/linalg/random_matrix.hpp"
#include "pstrack/linalg/svd.hpp"

namespace pstrack {

/// How the off-diagonal blocks are scaled in the probe.
enum class growth_regime {
  geometric,  ///< ||A_i|| ~ rho^i
  unit,       ///< ||A_i|| ~ 1
};

/// How the off-diagonal blocks are drawn.
enum class block_shape {
  random,   ///< entries uniform in the unit square
  unitary,  ///< random unitary times the scale
  aligned,  ///< scale times U V^H with A_0 = U S V^H, the worst case for error growth
};

struct growth_probe_config {
  std::size_t n = 4;
  std::size_t degree = 8;
  double kappa = 1e4;
  double rho = 1.0;
  growth_regime regime = growth_regime::geometric;
  block_shape shape = block_shape::random;
  std::uint64_t seed = 1;
};

/// Solves a block system with a prescribed cond(A_0) and known solution
/// (||x_i|| ~ rho^i) and returns ||x_i - x_i^true|| / ||x_i^true|| per index.
/// The right-hand sides are formed in quad double and rounded to R.
template <xprec::working_real R>
std::vector<double> error_growth_probe(const growth_probe_config& cfg) {
  using Q = xprec::qd_real;
  if (cfg.kappa < 1.0) throw domain_error("kappa must be at least one");
  if (!(cfg.rho > 0.0)) throw domain_error("rho must be positive");
  if (cfg.n == 0) throw dimension_error("probe needs n >= 1");
  const std::size_t n = cfg.n;
  const std::size_t d = cfg.degree;
  random_source rng(cfg.seed);

  auto rounded = [](const matrix<Q>& a) {
    matrix<R> out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        out(i, j) = {xprec::narrow<R>(a(i, j).re), xprec::narrow<R>(a(i, j).im)};
    return out;
  };
  auto widened = [](const matrix<R>& a) {
    matrix<Q> out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = xprec::xcomplex<Q>(a(i, j));
    return out;
  };

  // A_0 = U diag(1 .. 1/kappa) V^H
  matrix<Q> sigma(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    sigma(i, i) = xprec::xcomplex<Q>(Q(std::pow(cfg.kappa, -e)));
  }
  const auto u = random_unitary<Q>(n, rng);
  const auto v = random_unitary<Q>(n, rng);
  std::vector<matrix<R>> blocks{rounded(u * sigma * adjoint(v))};
  for (std::size_t i = 1; i <= d; ++i) {
    matrix<Q> a;
    switch (cfg.shape) {
      case block_shape::random:
        a = random_matrix<Q>(n, n, rng);
        break;
      case block_shape::unitary:
        a = random_unitary<Q>(n, rng);
        break;
      case block_shape::aligned:
        a = u * adjoint(v);
        break;
    }
    const double target = cfg.regime == growth_regime::geometric ? std::pow(cfg.rho, static_cast<double>(i)) : 1.0;
    const Q scale = Q(target) / svd(a).largest();
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) a(r, c) = a(r, c) * scale;
    blocks.push_back(rounded(a));
  }
  std::vector<cvector<Q>> truth;
  for (std::size_t i = 0; i <= d; ++i) {
    cvector<Q> x(n);
    for (auto& z : x) z = rng.in_square<Q>();
    const Q scale = Q(std::pow(cfg.rho, static_cast<double>(i))) / norm2(x);
    for (auto& z : x) z = z * scale;
    cvector<R> xr(n);
    for (std::size_t r = 0; r < n; ++r) xr[r] = {xprec::narrow<R>(x[r].re), xprec::narrow<R>(x[r].im)};
    for (std::size_t r = 0; r < n; ++r) x[r] = xprec::xcomplex<Q>(xr[r]);
    truth.push_back(std::move(x));
  }
  std::vector<matrix<Q>> wide;
  for (const auto& a : blocks) wide.push_back(widened(a));
  const auto b_wide = block_multiply(wide, truth);

  block_toeplitz_system<R> sys{blocks, {}};
  for (const auto& b : b_wide) {
    cvector<R> br(n);
    for (std::size_t r = 0; r < n; ++r) br[r] = {xprec::narrow<R>(b[r].re), xprec::narrow<R>(b[r].im)};
    sys.rhs.push_back(std::move(br));
  }
  const auto x = solve_sequential(sys);
  std::vector<double> errors;
  for (std::size_t i = 0; i <= d; ++i) {
    cvector<Q> diff(n);
    for (std::size_t r = 0; r < n; ++r) diff[r] = xprec::xcomplex<Q>(x[i][r]) - truth[i][r];
    errors.push_back(xprec::to_double(norm2(diff) / norm2(truth[i])));
  }
  return errors;
}

/// Number of leading indices whose relative error stays below the threshold.
inline std::size_t accuracy_horizon(const std::vector<double>& errors, double threshold = 1e-3) {
  std::size_t k = 0;
  while (k < errors.size() && errors[k] < threshold) ++k;
  return k;
}

}  // namespace pstrack
