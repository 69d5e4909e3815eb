#include <gtest/gtest.h>

#include <cmath>

#include "pstrack/tracker.hpp"

using namespace pstrack;
using namespace pstrack::xprec;
using DD = dd_real;
using QD = qd_real;

namespace {

template <class R>
std::vector<xcomplex<R>> point(std::initializer_list<double> v) {
  std::vector<xcomplex<R>> x;
  for (double a : v) x.emplace_back(R(a));
  return x;
}

template <class R>
std::vector<R> step_sizes(const tracker_state<R>& st) {
  std::vector<R> out;
  for (const auto& rec : st.log) out.push_back(rec.delta_t);
  return out;
}

}  // namespace

TEST(Corrector, ExactRootNeedsNoIterations) {
  const auto sys = parse_system<DD>("n 1\nx0^2 - 1;");
  work_crew crew(1);
  const auto r = corrector(sys, point<DD>({1.0}), default_corrector_tolerance<DD>(), 8, crew);
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.residual, DD(0.0));
}

TEST(Corrector, QuadraticConvergence) {
  const auto sys = parse_system<DD>("n 1\nx0^2 - 1;");
  work_crew crew(1);
  // Errors 0.1, 4.5e-3, 1e-5, 5e-11, 1.3e-21, 8e-43: four iterations reach
  // sqrt(eps), the fifth reaches eps^(3/4).
  const DD loose = sqrt(DD(real_traits<DD>::epsilon));
  const auto r = corrector(sys, point<DD>({1.1}), loose, 8, crew);
  EXPECT_LE(r.iterations, 4u);
  EXPECT_LE(to_double(abs(r.x[0] - xcomplex<DD>(DD(1.0)))), 1e-20);
  EXPECT_LE(r.residual, loose);
  const auto tight = corrector(sys, point<DD>({1.1}), default_corrector_tolerance<DD>(), 8, crew);
  EXPECT_EQ(tight.iterations, 5u);
  EXPECT_LE(to_double(abs(tight.x[0] - xcomplex<DD>(DD(1.0)))), 1e-31);
}

TEST(Corrector, SingularJacobianIsAnError) {
  const auto sys = parse_system<DD>("n 1\nx0^2 - 1;");
  work_crew crew(1);
  EXPECT_THROW(corrector(sys, point<DD>({0.0}), default_corrector_tolerance<DD>(), 8, crew), singular_matrix);
}

TEST(Corrector, NoRealRootFails) {
  const auto sys = parse_system<DD>("n 1\nx0^2 + 1;");
  work_crew crew(1);
  EXPECT_THROW(corrector(sys, point<DD>({0.5}), default_corrector_tolerance<DD>(), 6, crew), corrector_failure);
  EXPECT_THROW(corrector(sys, point<DD>({0.5}), DD(0.0), 6, crew), domain_error);
}

TEST(ShiftHomotopy, MovesTheOrigin) {
  const auto sys = parse_system<DD>("n 2 d 3\n(2,1)*x0*x1*t + t^3 - x1; x0^2 + {(1,0),(0,2),(3,0),(0,0)};");
  work_crew crew(2);
  const xcomplex<DD> delta(DD(0.25), DD(-0.5));
  const auto moved = shift_homotopy(sys, delta, crew);
  const auto x = point<DD>({0.3, -1.7});
  const auto a = evaluate_at(moved, std::span<const xcomplex<DD>>(x), xcomplex<DD>());
  const auto b = evaluate_at(sys, std::span<const xcomplex<DD>>(x), delta);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(to_double(abs(a[i] - b[i])), 1e-30);
}

TEST(TrackPath, LinearPathInOneStep) {
  const auto hom = parse_system<DD>("n 1 d 1\nx0 - 1 - t;");
  tracker_config<DD> cfg;
  const auto st = track_path(hom, point<DD>({1.0}), cfg);
  ASSERT_EQ(st.log.size(), 1u);
  EXPECT_EQ(st.log[0].decision.binding, step_binding::target);
  EXPECT_TRUE(is_inf(st.log[0].decision.curvature));
  EXPECT_EQ(st.t_global, DD(1.0));
  EXPECT_LE(to_double(abs(st.x_point[0] - xcomplex<DD>(DD(2.0)))), 1e-30);
}

TEST(TrackPath, SquareRootPath) {
  const auto hom = parse_system<DD>("n 1 d 1\nx0^2 - 1 + t;");
  tracker_config<DD> cfg;
  cfg.t_target = DD(0.75);
  cfg.threads = 2;
  const auto st = track_path(hom, point<DD>({1.0}), cfg);
  EXPECT_LE(to_double(abs(st.x_point[0] - xcomplex<DD>(DD(0.5)))), 1e-20);
  EXPECT_GE(st.log.size(), 2u);
  DD t(0.0);
  for (const auto& rec : st.log) {
    EXPECT_EQ(rec.t_start, t);
    t = t + rec.delta_t;
    EXPECT_LE(rec.corrector_residual, cfg.corrector_tolerance());
    EXPECT_LE(rec.delta_t, rec.decision.delta_t);
  }
  EXPECT_EQ(t, st.t_global);
  EXPECT_GE(st.times.total(), 0.0);
}

TEST(TrackPath, StaysWithinHalfTheCurvatureBound) {
  const auto hom = parse_system<DD>("n 1 d 1\nx0^2 - 1 + t;");
  tracker_config<DD> cfg;
  cfg.t_target = DD(0.99);
  for (std::size_t steps = 1;; ++steps) {
    cfg.max_steps = steps;
    try {
      const auto st = track_path(hom, point<DD>({1.0}), cfg);
      const DD exact = sqrt(DD(1.0) - st.t_global);
      EXPECT_LE(to_double(abs(st.x_point[0] - xcomplex<DD>(exact))), to_double(st.log.back().decision.curvature) / 2);
      break;
    } catch (const tracking_error<DD>& e) {
      ASSERT_EQ(e.kind(), tracking_failure::step_failure);
      const auto& st = e.state();
      const DD exact = sqrt(DD(1.0) - st.t_global);
      const double dev = to_double(abs(st.x_point[0] - xcomplex<DD>(exact)));
      EXPECT_LE(dev, to_double(st.log.back().decision.curvature) / 2);
      EXPECT_LE(dev, 1e-20);
    }
    ASSERT_LT(steps, 200u);
  }
}

TEST(TrackPath, CyclicFourStartIsSingular) {
  const auto hom = make_newton_homotopy(generate_cyclic<QD>(4));
  tracker_config<QD> cfg;
  cfg.t_target = QD(0.5);
  try {
    (void)track_path(hom, point<QD>({1.0, -1.0, -1.0, 1.0}), cfg);
    FAIL() << "the Jacobian at this point has rank 2";
  } catch (const tracking_error<QD>& e) {
    EXPECT_EQ(e.kind(), tracking_failure::singular_jacobian);
    EXPECT_TRUE(e.log().empty());
  }
}

TEST(TrackPath, CyclicFiveThreadInvariant) {
  const auto hom = make_newton_homotopy(generate_cyclic<QD>(5));
  const auto x0 = cyclic_root_of_unity_point<QD>(5);
  tracker_config<QD> cfg;
  cfg.t_target = QD(0.5);
  std::vector<std::vector<QD>> sizes;
  for (std::size_t p : {1, 2, 4}) {
    cfg.threads = p;
    const auto st = track_path(hom, x0, cfg);
    for (const auto& rec : st.log) EXPECT_EQ(rec.retries, 0u);
    const auto res = evaluate_at(st.hom, std::span<const xcomplex<QD>>(st.x_point), xcomplex<QD>());
    EXPECT_LE(to_double(norm2(res)), 1e-30);
    sizes.push_back(step_sizes(st));
  }
  EXPECT_EQ(sizes[0], sizes[1]);
  EXPECT_EQ(sizes[0], sizes[2]);
}

TEST(TrackPath, SingularityAheadIsAStepFailure) {
  const auto hom = parse_system<DD>("n 1 d 1\nx0^2 - 1 + t;");
  tracker_config<DD> cfg;
  cfg.t_target = DD(2.0);
  try {
    (void)track_path(hom, point<DD>({1.0}), cfg);
    FAIL();
  } catch (const tracking_error<DD>& e) {
    EXPECT_EQ(e.kind(), tracking_failure::step_failure) << e.what();
    EXPECT_FALSE(e.log().empty());
    EXPECT_LT(to_double(e.state().t_global), 1.0);
    EXPECT_GT(to_double(e.state().t_global), 0.999);
  }
}

TEST(TrackPath, ConfigurationErrors) {
  const auto hom = parse_system<DD>("n 1 d 1\nx0 - 1 - t;");
  tracker_config<DD> cfg;
  cfg.pade = pade_degrees{5, 5};
  EXPECT_THROW(track_path(hom, point<DD>({1.0}), cfg), domain_error);
  cfg.pade.reset();
  cfg.threads = 0;
  EXPECT_THROW(track_path(hom, point<DD>({1.0}), cfg), domain_error);
  cfg.threads = 1;
  EXPECT_THROW(track_path(hom, point<DD>({1.0, 2.0}), cfg), dimension_error);
}
