#include <gtest/gtest.h>

#include "catalog.hpp"
#include "wconvex/functions.hpp"
#include "wconvex/verify.hpp"

using namespace wconvex;

TEST(ExtendedReal, InfinityArithmetic) {
  const auto inf = ExtendedReal::infinity();
  EXPECT_FALSE((inf + 1.0).is_finite());
  EXPECT_TRUE((0.0 * inf).is_finite());
  EXPECT_EQ((0.0 * inf).value(), 0.0);
  EXPECT_FALSE((2.0 * inf).is_finite());
  EXPECT_EQ(max(ExtendedReal(1.0), ExtendedReal(3.0)).value(), 3.0);
  EXPECT_THROW(ExtendedReal(std::nan("")), domain_error);
  EXPECT_THROW(ExtendedReal(-std::numeric_limits<double>::infinity()), domain_error);
}

TEST(ScalarMap, ParsesKnownTags) {
  EXPECT_DOUBLE_EQ(ScalarMap::parse("square")(3.0), 9.0);
  EXPECT_DOUBLE_EQ(ScalarMap::parse("power:1.5")(4.0), 8.0);
  EXPECT_DOUBLE_EQ(ScalarMap::parse("exp")(0.0), 1.0);
  EXPECT_THROW(ScalarMap::parse("cube"), domain_error);
  EXPECT_THROW(ScalarMap::parse("power:0.5"), domain_error);
  EXPECT_THROW(ScalarMap::parse("power:x"), domain_error);
}

TEST(Functions, DistanceToPointValues) {
  EuclideanSpace e(2);
  const auto f = distance_to_point(e, RealVector{0, 0}, ScalarMap::square());
  EXPECT_DOUBLE_EQ(f(RealVector{3, 4}), 25.0);
  EXPECT_EQ(f.claim(), Convexity::strict);
  EXPECT_EQ(distance_to_point(e, RealVector{0, 0}).claim(), Convexity::convex);
}

TEST(Functions, CombinatorsRejectBadArguments) {
  EuclideanSpace e(2);
  const auto f = distance_to_point(e, RealVector{0, 0});
  EXPECT_THROW(scale(f, -1.0), domain_error);
  EXPECT_THROW(conical(std::vector{f}, {1.0, 2.0}), domain_error);
  EXPECT_THROW(conical(std::vector{f, f}, {1.0, -2.0}), domain_error);
  EXPECT_THROW(sum(std::vector<WFn<EuclideanSpace>>{}), domain_error);
  const auto g = distance_to_point(EuclideanSpace(3), RealVector{0, 0, 0});
  EXPECT_THROW(sum(std::vector{f, g}), type_error);
}

TEST(Functions, RestrictAndIndicatorAreInfiniteOutside) {
  EuclideanSpace e(2);
  const auto disk = ball_set(e, RealVector{0, 0}, 1.0);
  const auto f = restrict(distance_to_point(e, RealVector{0, 0}), disk);
  EXPECT_FALSE(f.evaluate(RealVector{2, 0}).is_finite());
  EXPECT_THROW(f(RealVector{2, 0}), domain_error);
  EXPECT_DOUBLE_EQ(f(RealVector{0.5, 0}), 0.5);
  EXPECT_EQ(indicator(disk)(RealVector{0.1, 0.1}), 0.0);
}

TEST(Functions, LebesgueAndBallSize) {
  EXPECT_DOUBLE_EQ(interval_length(IntervalSpace())(Interval(0.25, 0.75)), 0.5);
  EXPECT_DOUBLE_EQ(ball_size(BallSpace(2))(Ball({3, 4}, 1.0)), 6.0);
}

TEST(Sets, MembershipAndSampling) {
  EuclideanSpace e(2);
  const auto seg = segment_set(e, RealVector{0, -1}, RealVector{0, 1});
  EXPECT_TRUE(seg.contains(RealVector{0, 0.3}));
  EXPECT_FALSE(seg.contains(RealVector{0.01, 0.3}));
  EXPECT_FALSE(seg.contains(RealVector{0, 1.01}));
  const auto box = box_set(e, {-1, -1}, {1, 1});
  EXPECT_TRUE(box.contains(RealVector{1, -1}));
  EXPECT_FALSE(box.contains(RealVector{1.001, 0}));
  EXPECT_THROW(box_set(e, {1, 1}, {0, 0}), domain_error);
  EXPECT_THROW(ball_set(e, RealVector{0, 0}, 0.0), domain_error);
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    EXPECT_TRUE(seg.contains(*seg.sample(rng)));
    EXPECT_TRUE(box.contains(*box.sample(rng)));
  }
}

TEST(Sets, GenericSegmentMembership) {
  IntervalSpace s;
  const auto seg = segment_set(s, Interval(0, 0.2), Interval(0.5, 1.0));
  EXPECT_TRUE(seg.contains(Interval(0.25, 0.6)));
  EXPECT_FALSE(seg.contains(Interval(0.25, 0.9)));
}

TEST(Sets, EmptyIntersectionExhaustsSampler) {
  EuclideanSpace e(2);
  const auto a = ball_set(e, RealVector{0, 0}, 1.0);
  const auto b = ball_set(e, RealVector{5, 0}, 1.0);
  const auto c = intersection_set(std::vector{a, b}, 50);
  Rng rng(1);
  EXPECT_FALSE(c.sample(rng));
}

TEST(Sets, CatalogueSetsAreConvex) {
  EuclideanSpace e(2);
  const auto lens =
      intersection_set(std::vector{ball_set(e, RealVector{0, 0}, 1.0), ball_set(e, RealVector{1, 0}, 1.0)});
  EXPECT_TRUE(set_convexity_check(e, lens, 3000, 4).passed());
  const auto sub = sublevel_set(distance_to_point(e, RealVector{1, 1}, ScalarMap::square()), 2.0);
  EXPECT_TRUE(set_convexity_check(e, sub, 3000, 5).passed());
  BallSpace bs(2);
  EXPECT_TRUE(set_convexity_check(bs, ball_set(bs, Ball({0, 0}, 1.0), 1.5), 3000, 6).passed());
}

TEST(Catalogue, ConvexEntriesPassWConvexity) {
  for (const auto& e : catalog::convex_entries()) {
    const auto v = verify_wconvex(e.f.space(), e.f, 4000, 31);
    EXPECT_TRUE(v.passed()) << e.name << " worst " << v.worst_violation;
  }
}

TEST(Catalogue, StrictEntriesPassStrictCheck) {
  int strict = 0;
  for (const auto& e : catalog::convex_entries()) {
    if (!e.strict) continue;
    ++strict;
    EXPECT_TRUE(verify_strict_wconvex(e.f.space(), e.f, 4000, 32, 0.1).passed()) << e.name;
  }
  EXPECT_EQ(strict, 4);
}

TEST(Catalogue, PlantedEntriesFailWithReplayableWitness) {
  for (const auto& e : catalog::planted_entries()) {
    const auto v = verify_wconvex(e.f.space(), e.f, 4000, 33);
    ASSERT_TRUE(v.failed()) << e.name;
    ASSERT_TRUE(v.witness);
    EXPECT_TRUE(catalog::witness_replays(e.f, *v.witness)) << e.name;
  }
}

TEST(Catalogue, DistanceIsNotStrictlyConvex) {
  const auto e = catalog::convex_entries().front();
  EXPECT_TRUE(verify_strict_wconvex(e.f.space(), e.f, 4000, 34, 0.1).failed());
}

TEST(Catalogue, ExampleCombinatorsHoldOnLine) {
  // x^2 and |x| on the real line, together with the combinators built from them.
  EuclideanSpace line(1, Norm::l2, 5.0);
  const auto sq = distance_to_point(line, RealVector{0}, ScalarMap::square());
  const auto ab = distance_to_point(line, RealVector{2});
  for (const auto& f : {sq, ab, sum(std::vector{sq, ab}), max_of(std::vector{sq, ab}), scale(ab, 0.5)}) {
    EXPECT_TRUE(verify_wconvex(line, f, 3000, 35).passed()) << f.label();
  }
}
