#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "oracle.hpp"
#include "pstrack/series.hpp"

using namespace pstrack;
using namespace pstrack::xprec;

namespace {

template <class R>
truncated_series<R> random_series(std::mt19937_64& gen, std::size_t d) {
  truncated_series<R> s(d);
  for (std::size_t k = 0; k <= d; ++k) s[k] = oracle::random_complex<R>(gen);
  return s;
}

/// Largest coefficient error of a against b, scaled by the coefficient's
/// magnitude bound `scale`.
template <class R>
double max_scaled_err(const truncated_series<R>& a, const std::vector<oracle::big_complex>& exact,
                      const std::vector<oracle::big>& scale) {
  double worst = 0.0;
  for (std::size_t k = 0; k <= a.degree(); ++k) {
    const oracle::big e = oracle::abs(oracle::to_big(a[k]) - exact[k]);
    worst = std::max(worst, oracle::big(e / scale[k]).template convert_to<double>());
  }
  return worst;
}

template <class R>
class SeriesTyped : public ::testing::Test {};
using AllReals = ::testing::Types<double, dd_real, qd_real>;
TYPED_TEST_SUITE(SeriesTyped, AllReals);

}  // namespace

TYPED_TEST(SeriesTyped, ConvolveIdentityAndCounting) {
  using R = TypeParam;
  using C = xcomplex<R>;
  std::mt19937_64 gen(11);
  const auto b = random_series<R>(gen, 6);
  EXPECT_EQ(convolve(truncated_series<R>::constant(C(R(1.0)), 6), b), b);

  truncated_series<R> ones(3);
  for (std::size_t k = 0; k <= 3; ++k) ones[k] = C(R(1.0));
  const auto c = convolve(ones, ones);
  for (std::size_t k = 0; k <= 3; ++k) EXPECT_EQ(c[k], C(R(double(k + 1))));
}

TYPED_TEST(SeriesTyped, ConvolveMatchesFullProductOracle) {
  using R = TypeParam;
  const double eps = real_traits<R>::epsilon;
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 8;
    const auto a = random_series<R>(gen, d);
    const auto b = random_series<R>(gen, d);
    const auto c = convolve(a, b);
    std::vector<oracle::big_complex> exact(d + 1);
    std::vector<oracle::big> scale(d + 1, 0);
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; i + j <= d; ++j) {
        exact[i + j] = exact[i + j] + oracle::to_big(a[i]) * oracle::to_big(b[j]);
        scale[i + j] += oracle::abs(oracle::to_big(a[i])) * oracle::abs(oracle::to_big(b[j]));
      }
    EXPECT_LE(max_scaled_err(c, exact, scale), 4.0 * eps);
  }
}

TYPED_TEST(SeriesTyped, RingAxioms) {
  using R = TypeParam;
  const double eps = real_traits<R>::epsilon;
  std::mt19937_64 gen(13);
  for (std::size_t d : {4u, 8u, 16u}) {
    const double tol = 8.0 * double(d) * eps;
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_series<R>(gen, d);
      const auto b = random_series<R>(gen, d);
      const auto c = random_series<R>(gen, d);
      // inputs have |c_k| <= sqrt(2), so products of three are bounded by ~(d+1)^2 * 2.8
      const double bound = 3.0 * double((d + 1) * (d + 1));
      auto close = [&](const truncated_series<R>& x, const truncated_series<R>& y) {
        for (std::size_t k = 0; k <= d; ++k)
          if (to_double(abs(x[k] - y[k])) > tol * bound) return false;
        return true;
      };
      EXPECT_TRUE(close(convolve(a, b), convolve(b, a)));
      EXPECT_TRUE(close(convolve(convolve(a, b), c), convolve(a, convolve(b, c))));
      EXPECT_TRUE(close(convolve(a, b + c), convolve(a, b) + convolve(a, c)));
    }
  }
}

TYPED_TEST(SeriesTyped, DegreeMismatchIsAnError) {
  using R = TypeParam;
  truncated_series<R> a(3), b(4);
  EXPECT_THROW((void)convolve(a, b), dimension_error);
  EXPECT_THROW(a += b, dimension_error);
  EXPECT_THROW((void)truncated_series<R>(std::vector<xcomplex<R>>{}), dimension_error);
}

TYPED_TEST(SeriesTyped, ShiftLinearAndIdentity) {
  using R = TypeParam;
  using C = xcomplex<R>;
  const C delta(R(0.25), R(-0.5));
  const truncated_series<R> s{C(R(1.0)), C(R(1.0))};
  const auto r = shift(s, delta);
  EXPECT_EQ(r[0], C(R(1.0)) + delta);
  EXPECT_EQ(r[1], C(R(1.0)));

  std::mt19937_64 gen(14);
  const auto q = random_series<R>(gen, 8);
  EXPECT_EQ(shift(q, C()), q);
}

TYPED_TEST(SeriesTyped, ShiftRoundTrip) {
  using R = TypeParam;
  using C = xcomplex<R>;
  const double eps = real_traits<R>::epsilon;
  std::mt19937_64 gen(15);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_series<R>(gen, 8);
    const C delta = oracle::random_complex<R>(gen) * R(0.25);
    const auto back = shift(shift(s, delta), -delta);
    const R scale = max_abs(s);
    for (std::size_t k = 0; k <= 8; ++k) EXPECT_LE(to_double(abs(back[k] - s[k]) / scale), 8.0 * 8 * eps);
  }
}

TYPED_TEST(SeriesTyped, ShiftedEvaluationMatchesDirect) {
  using R = TypeParam;
  using C = xcomplex<R>;
  const double eps = real_traits<R>::epsilon;
  std::mt19937_64 gen(16);
  const std::size_t d = 8;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_series<R>(gen, d);
    const C delta = oracle::random_complex<R>(gen) * R(0.3);
    const C t = oracle::random_complex<R>(gen) * R(0.3);
    const C lhs = evaluate(shift(s, delta), t);
    // exact s(t + delta) in wide arithmetic
    const oracle::big_complex x = oracle::to_big(t) + oracle::to_big(delta);
    oracle::big_complex acc = oracle::to_big(s[d]);
    oracle::big scale = oracle::abs(oracle::to_big(s[d]));
    const oracle::big ax = oracle::abs(x);
    for (std::size_t k = d; k-- > 0;) {
      acc = acc * x + oracle::to_big(s[k]);
      scale = scale * ax + oracle::abs(oracle::to_big(s[k]));
    }
    const double err = oracle::big(oracle::abs(oracle::to_big(lhs) - acc) / scale).convert_to<double>();
    EXPECT_LE(err, 16.0 * d * eps);
  }
}

TYPED_TEST(SeriesTyped, HornerEvaluation) {
  using R = TypeParam;
  using C = xcomplex<R>;
  const truncated_series<R> s{C(R(1.0)), C(R(2.0)), C(R(3.0))};
  EXPECT_EQ(evaluate(s, C(R(2.0))), C(R(17.0)));
  EXPECT_EQ(evaluate(s, C()), C(R(1.0)));
}

TYPED_TEST(SeriesTyped, FabryOnGeometricSeries) {
  using R = TypeParam;
  using C = xcomplex<R>;
  truncated_series<R> geo(8), ones(8);
  for (std::size_t k = 0; k <= 8; ++k) {
    geo[k] = C(R(std::ldexp(1.0, int(k))));
    ones[k] = C(R(1.0));
  }
  const auto f = fabry_ratio(geo);
  EXPECT_EQ(f.z, C(R(0.5)));
  EXPECT_EQ(f.radius, R(0.5));
  const auto g = fabry_ratio(ones);
  EXPECT_EQ(g.radius, R(1.0));

  const auto v = vector_fabry(std::vector<truncated_series<R>>{ones, geo});
  EXPECT_EQ(v.radius, R(0.5));
  EXPECT_EQ(v.component, 1u);
  EXPECT_EQ(v.z, C(R(0.5)));
  const auto single = vector_fabry(std::vector<truncated_series<R>>{geo});
  EXPECT_EQ(single.radius, f.radius);
}

TEST(SeriesFabry, SquareRootBranchPoint) {
  using R = dd_real;
  using C = xcomplex<R>;
  // binomial coefficients of sqrt(1 + t), exact rationals
  using boost::multiprecision::cpp_rational;
  truncated_series<R> s(8);
  cpp_rational c = 1;
  for (int k = 0; k <= 8; ++k) {
    s[k] = C(oracle::from_big<R>(oracle::big(c)));
    c = c * (cpp_rational(1, 2) - k) / (k + 1);
  }
  const auto f = fabry_ratio(s);
  EXPECT_NEAR(to_double(f.radius), 1.0, 0.25);

  truncated_series<R> geo(8);
  for (std::size_t k = 0; k <= 8; ++k) geo[k] = C(R(std::ldexp(1.0, int(k))));
  const auto v = vector_fabry(std::vector<truncated_series<R>>{s, geo});
  EXPECT_NEAR(to_double(v.radius), 0.5, 0.125);
}

TEST(SeriesFabry, NoiseFloorGivesInfiniteRadius) {
  using R = dd_real;
  using C = xcomplex<R>;
  truncated_series<R> s(4);
  s[0] = C(R(1.0));
  s[3] = C(R(0.5));
  EXPECT_FALSE(fabry_ratio(s).finite());
  s[4] = C(R(1e-20));  // below sqrt(eps) relative to max |c_k|
  EXPECT_TRUE(is_inf(fabry_ratio(s).radius));
  s[4] = C(R(1e-10));
  EXPECT_TRUE(fabry_ratio(s).finite());
  const std::vector<truncated_series<R>> zeros(3, truncated_series<R>(4));
  EXPECT_TRUE(is_inf(vector_fabry(std::span<const truncated_series<R>>(zeros)).radius));
  EXPECT_THROW((void)fabry_ratio(truncated_series<R>(0)), dimension_error);
  EXPECT_THROW((void)vector_fabry(std::span<const truncated_series<R>>()), dimension_error);
}
