#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "wconvex/distance_map.hpp"
#include "wconvex/fixed_point.hpp"
#include "wconvex/minimize.hpp"
#include "wconvex/projection.hpp"
#include "wconvex/scenario.hpp"
#include "wconvex/verify.hpp"

using namespace wconvex;

namespace {

std::vector<RealVector> queries(const EuclideanSpace& e, std::size_t n, std::uint64_t seed) {
  std::vector<RealVector> out;
  Rng rng(seed);
  for (std::size_t k = 0; k < n; ++k) out.push_back(e.sample(rng));
  return out;
}

}  // namespace

TEST(Projection, DiskMatchesClosedForm) {
  EuclideanSpace e(2, Norm::l2, 4.0);
  const RealVector c{0.5, -0.25};
  const auto disk = ball_set(e, c, 1.0);
  for (const auto& x : queries(e, 100, 1)) {
    const auto r = project(e, disk, x);
    ASSERT_TRUE(r.best);
    EXPECT_TRUE(disk.contains(*r.best));
    EXPECT_NEAR(r.distance, oracle::l2_disk_distance(x, c, 1.0), 1e-6);
  }
}

TEST(Projection, SegmentMatchesClosedForm) {
  EuclideanSpace e(2, Norm::l2, 4.0);
  const RealVector a{-1, 0.5};
  const RealVector b{2, -1};
  const auto seg = segment_set(e, a, b);
  for (const auto& x : queries(e, 100, 2)) {
    const auto r = project(e, seg, x);
    ASSERT_TRUE(r.best);
    EXPECT_NEAR(r.distance, oracle::l2_segment_distance(x, a, b), 1e-6);
  }
}

TEST(Projection, BoxMatchesClosedForm) {
  EuclideanSpace e(3, Norm::l2, 4.0);
  const RealVector lo{-1, 0, -0.5};
  const RealVector hi{1, 2, 0.5};
  const auto box = box_set(e, lo, hi);
  ProjectionConfig cfg;
  cfg.starts = 8;
  cfg.iters = 60;
  for (const auto& x : queries(e, 50, 3)) {
    const auto r = project(e, box, x, cfg);
    ASSERT_TRUE(r.best);
    EXPECT_TRUE(box.contains(*r.best));
    EXPECT_NEAR(r.distance, oracle::l2_box_distance(x, lo, hi), 1e-6);
  }
}

TEST(Projection, NonEuclideanNormsMatchGridSearch) {
  const RealVector lo{-1, -0.5};
  const RealVector hi{0.5, 1};
  const auto grid = oracle::box_grid(lo, hi, 200);
  for (int p : {1, 0}) {
    EuclideanSpace e(2, p == 1 ? Norm::l1 : Norm::linf, 3.0);
    const auto box = box_set(e, lo, hi);
    for (const auto& x : queries(e, 20, 4)) {
      const auto r = project(e, box, x);
      const double ref = oracle::nearest(x, grid, p, 0.0).distance;
      EXPECT_LE(r.distance, ref + 1e-9);
      EXPECT_GE(r.distance, ref - 0.02);
    }
  }
}

TEST(Projection, MemberProjectsToItself) {
  EuclideanSpace e(2);
  const auto disk = ball_set(e, RealVector{0, 0}, 1.0);
  const auto r = project(e, disk, RealVector{0.2, 0.3});
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(diameter(e, r.candidates), 0.0);
}

TEST(Projection, ExhaustedSamplerYieldsNoPoint) {
  EuclideanSpace e(2);
  const auto empty =
      intersection_set(std::vector{ball_set(e, RealVector{0, 0}, 1.0), ball_set(e, RealVector{4, 0}, 1.0)}, 20);
  const auto r = project(e, empty, RealVector{0, 0});
  EXPECT_FALSE(r.best);
  EXPECT_TRUE(r.sampler_exhausted);
  ProjectionConfig bad;
  bad.starts = 0;
  EXPECT_THROW(project(e, empty, RealVector{0, 0}, bad), domain_error);
}

TEST(Projection, BallSpaceDistance) {
  BallSpace bs(1);
  const auto target = ball_set(bs, Ball({0}, 1.0), 1.0);
  const auto r = project(bs, target, Ball({5}, 1.0));
  // d(B(5,1), B(c,s)) = |5 - c| + |1 - s| over |c| + |1 - s| <= 1.
  EXPECT_NEAR(r.distance, 4.0, 1e-6);
}

TEST(Chebyshev, EuclideanProjectionsAreUnique) {
  EuclideanSpace e(2, Norm::l2, 3.0);
  const auto box = box_set(e, {-1, -1}, {1, 1});
  ChebyshevConfig cfg;
  cfg.strict_certified = true;
  const auto rep = chebyshev_diagnostic(e, box, queries(e, 10, 5), cfg);
  EXPECT_LE(rep.max_diameter, 1e-6);
  EXPECT_FALSE(rep.any_inconsistent);
}

TEST(Chebyshev, SupNormSegmentHasManyNearestPoints) {
  EuclideanSpace e(2, Norm::linf);
  const RealVector a{-1, 1};
  const RealVector b{1, 1};
  const auto seg = segment_set(e, a, b);
  const RealVector x{0, 0};
  const auto rep = chebyshev_diagnostic(e, seg, std::vector<RealVector>{x});
  const auto ref = oracle::nearest(x, oracle::segment_grid(a, b, 400), 0, 1e-9);
  EXPECT_NEAR(rep.entries[0].distance, ref.distance, 1e-9);
  EXPECT_GE(rep.max_diameter, 1.9);
  EXPECT_GE(ref.diameter, 1.9);
  EXPECT_FALSE(rep.entries[0].unique);
  EXPECT_THROW(chebyshev_diagnostic(e, seg, std::vector<RealVector>{}), domain_error);
}

TEST(Proximality, ClosedSetStabilizes) {
  EuclideanSpace e(2);
  const auto disk = ball_set(e, RealVector{0, 0}, 1.0);
  const auto rep = proximality_probe(e, disk, RealVector{3, 0}, 20, 1e-9);
  EXPECT_TRUE(rep.stabilized);
  EXPECT_NEAR(rep.distances.back(), 2.0, 1e-6);
  EXPECT_FALSE(rep.at_open_boundary);
}

TEST(Proximality, OpenBallFlagsTheBoundary) {
  EuclideanSpace e(2);
  const auto open = open_ball_set(e, RealVector{0, 0}, 1.0, 1e-3);
  const auto rep = proximality_probe(e, open, RealVector{3, 0}, 20, 1e-9);
  ASSERT_TRUE(rep.best);
  EXPECT_TRUE(rep.at_open_boundary);
  EXPECT_THROW(proximality_probe(e, open, RealVector{3, 0}, 0), domain_error);
}

TEST(DistanceMap, IsWConvexAndMatchesClosedForm) {
  EuclideanSpace e(2, Norm::l2, 3.0);
  const auto disk = ball_set(e, RealVector{0, 0}, 1.0);
  const auto dy = distance_map(e, disk);
  EXPECT_NEAR(dy(RealVector{0, 2.5}), 1.5, 1e-6);
  EXPECT_EQ(dy(RealVector{0.1, 0}), 0.0);
  EXPECT_TRUE(verify_wconvex(e, dy, 60, 9).passed());
  EXPECT_THROW(distance_map(e, disk, 0), domain_error);
}

TEST(Minimize, FindsTheCenterOfASquaredDistance) {
  EuclideanSpace e(2, Norm::l2, 3.0);
  const RealVector p{1.0, -0.5};
  const auto r = minimize(distance_to_point(e, p, ScalarMap::square()));
  ASSERT_TRUE(r.best);
  EXPECT_LT(e.distance(*r.best, p), 1e-5);
  EXPECT_LT(r.value, 1e-10);
}

TEST(Minimize, RespectsTheDomain) {
  EuclideanSpace e(1, Norm::l2, 3.0);
  const auto f = distance_to_point(e, RealVector{0}, ScalarMap::square());
  const auto right = box_set(e, {1}, {2});
  const auto r = minimize(restrict(f, right), {}, right);
  ASSERT_TRUE(r.best);
  EXPECT_NEAR((*r.best)[0], 1.0, 1e-5);
}

TEST(Mann, ContractionMatchesHandWrittenIteration) {
  EuclideanSpace e(2);
  const auto t = contraction_map(e, RealVector{0, 0}, 0.5);
  const auto r = mann_iterate(e, t, RealVector{3, -2}, MannSchedule::constant(0.5), 1e-6);
  EXPECT_TRUE(r.converged);
  const auto ref = oracle::averaged_iterations([](const oracle::Vec& x) { return oracle::Vec{x[0] / 2, x[1] / 2}; },
                                               {3, -2}, 0.5, 1e-6, 100000);
  EXPECT_NEAR(static_cast<double>(r.iterations), static_cast<double>(ref), 1.0);
  EXPECT_EQ(r.trace.size(), r.iterations + 1);
}

TEST(Mann, ReflectionConvergesInOneStep) {
  EuclideanSpace e(2);
  const auto r = mann_iterate(e, reflection_map(e, RealVector{0, 0}), RealVector{1, 2}, MannSchedule::constant(0.5));
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_TRUE(r.converged);
  EXPECT_THROW(reflection_map(IntervalSpace(), Interval(0, 1)), unsupported_error);
}

TEST(Mann, RotationConverges) {
  EuclideanSpace e(2);
  const auto rot = rotation_map(e, std::numbers::pi / 2);
  const auto r = mann_iterate(e, rot, RealVector{1, 0}, MannSchedule::constant(0.5), 1e-6);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 10000u);
  const auto ref = oracle::averaged_iterations(
      [](const oracle::Vec& x) { return oracle::Vec{-x[1], x[0]}; }, {1, 0}, 0.5, 1e-6, 100000);
  EXPECT_NEAR(static_cast<double>(r.iterations), static_cast<double>(ref), 1.0);
}

TEST(Mann, ExpansionDiverges) {
  EuclideanSpace e(1);
  const auto grow = affine_map(e, {{3.0}}, {0.0});
  const auto r = mann_iterate(e, grow, RealVector{1}, MannSchedule::constant(0.5), 1e-6, 1000);
  EXPECT_TRUE(r.diverged);
  EXPECT_FALSE(r.converged);
}

TEST(Mann, ScheduleParsing) {
  EXPECT_DOUBLE_EQ(MannSchedule::parse("constant:0.25").at(7), 0.25);
  EXPECT_DOUBLE_EQ(MannSchedule::parse("harmonic").at(0), 0.5);
  EXPECT_THROW(MannSchedule::parse("constant:1.5"), domain_error);
  EXPECT_THROW(MannSchedule::parse("geometric"), domain_error);
}

TEST(Mann, TraceCsv) {
  std::ostringstream out;
  write_trace_csv(out, {1.0, 0.5});
  EXPECT_EQ(out.str().substr(0, 19), "iteration,residual\n");
  EXPECT_NE(out.str().find("1,0.5"), std::string::npos);
}

TEST(Residual, ValuesAndExponent) {
  EuclideanSpace e(1);
  const auto half = contraction_map(e, RealVector{0}, 0.5);
  EXPECT_DOUBLE_EQ(residual_function(e, half)(RealVector{4}), 2.0);
  EXPECT_DOUBLE_EQ(residual_function(e, half, 2.0)(RealVector{4}), 4.0);
  EXPECT_THROW(residual_function(e, half, 0.5), domain_error);
}

TEST(Residual, OracleFindsFixedPoints) {
  EuclideanSpace e(2, Norm::l2, 3.0);
  const auto shifted = contraction_map(e, RealVector{1, -1}, 0.5);
  const auto rep = residual_minimizer_oracle(e, shifted);
  EXPECT_TRUE(rep.certified);
  EXPECT_TRUE(rep.fixed_point);
  EXPECT_FALSE(rep.inconsistent);
  EXPECT_LE(rep.residual, 1e-5);
  ASSERT_TRUE(rep.minimizer);
  EXPECT_LT(e.distance(*rep.minimizer, RealVector{1, -1}), 1e-5);
}

TEST(Nonexpansive, Classification) {
  EuclideanSpace e(2);
  EXPECT_TRUE(check_nonexpansive(e, rotation_map(e, 1.0), 2000, 1).passed());
  EXPECT_TRUE(check_nonexpansive(e, contraction_map(e, RealVector{0, 0}, 0.3), 2000, 1).passed());
  EXPECT_TRUE(check_nonexpansive(e, affine_map(e, {{2, 0}, {0, 2}}, {0, 0}), 2000, 1).failed());
}

TEST(Compact, QuadraticSineOnTheSquare) {
  EuclideanSpace e(2, Norm::l2, 2.0);
  const auto box = box_set(e, {-1, -1}, {1, 1});
  const auto rep = compact_fixed_point_scenario(e, quadratic_sine_map(e), box, RealVector{0.5, 0.5});
  EXPECT_TRUE(rep.self_map.passed());
  EXPECT_TRUE(rep.fixed_point_found);
  EXPECT_TRUE(rep.mann.converged);
  EXPECT_NEAR(rep.mann.point[0], (1.0 - std::sqrt(3.0)) / 2.0, 1e-5);
  EXPECT_NEAR(rep.mann.point[1], 0.0, 1e-5);
}
