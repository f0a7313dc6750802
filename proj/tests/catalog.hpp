#pragma once

// Function catalogue shared by the unit tests and the acceptance binary.
// Everything lives on AnySpace so one loop covers every space family.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wconvex/scenario.hpp"

namespace catalog {

using namespace wconvex;

struct Entry {
  std::string name;
  WFn<AnySpace> f;
  bool convex = true;
  bool strict = false;
  /// Height for the sublevel check.
  double h = 1.0;
};

inline AnySpace l2() { return AnySpace(EuclideanSpace(2, Norm::l2, 3.0)); }
inline AnySpace l1() { return AnySpace(EuclideanSpace(2, Norm::l1, 3.0)); }
inline AnySpace linf() { return AnySpace(EuclideanSpace(2, Norm::linf, 3.0)); }
inline AnySpace line() { return AnySpace(EuclideanSpace(1, Norm::l2, 3.0)); }
inline AnySpace balls() { return AnySpace(BallSpace(2, 3.0)); }
inline AnySpace intervals() { return AnySpace(IntervalSpace()); }
inline AnySpace product() {
  return AnySpace(ProductSpace<AnySpace, AnySpace>(l2(), intervals(), ProductMetric::d1));
}

inline AnyPoint vec(std::initializer_list<double> v) { return AnyPoint(RealVector(v)); }

inline WFn<AnySpace> dist(const AnySpace& s, AnyPoint p, const char* g = "identity") {
  return distance_to_point(s, std::move(p), ScalarMap::parse(g));
}

inline std::vector<Entry> convex_entries() {
  const AnySpace e = l2();
  const AnyPoint o = vec({0, 0});
  const AnyPoint a = vec({1, 0});
  const AnyPoint b = vec({1, 1});
  const AnyPoint p = vec({-1.5, 2});
  const auto disk = ball_set(e, o, 1.0);
  const auto box = lift_set(e, box_set(EuclideanSpace(2, Norm::l2, 3.0), {-1, -1}, {1, 1}));
  const auto d0 = dist(e, o);
  const auto mx = max_of(std::vector{d0, dist(e, b)});

  std::vector<Entry> out;
  out.push_back({"l2 d(.,0)", d0, true, false, 1.0});
  out.push_back({"l2 d(.,0)^2", dist(e, o, "square"), true, true, 1.0});
  out.push_back({"l2 exp d(.,0)", dist(e, o, "exp"), true, true, 3.0});
  out.push_back({"l2 d(.,a)^1.5", dist(e, a, "power:1.5"), true, true, 1.0});
  out.push_back({"l2 conical", conical(std::vector{dist(e, o, "square"), dist(e, b, "square")}, {1.0, 2.0}), true, true,
                 4.0});
  out.push_back({"l2 max", mx, true, false, 2.0});
  out.push_back({"l2 sum", sum(std::vector{d0, dist(e, o, "square")}), true, false, 2.0});
  out.push_back({"l2 scaled max", scale(mx, 3.0), true, false, 5.0});
  out.push_back({"l2 sup", sup_family(std::vector{d0, dist(e, a), dist(e, p)}), true, false, 3.0});
  out.push_back({"l2 restricted", restrict(dist(e, o, "square"), box), true, false, 1.0});
  out.push_back({"l2 indicator", indicator(disk), true, false, 0.5});
  out.push_back({"l2 composed", compose_increasing_convex(d0, ScalarMap::exp()), true, false, 3.0});
  out.push_back({"l1 d(.,q)", dist(l1(), vec({1, 2})), true, false, 2.0});
  out.push_back({"linf d(.,0)^2", dist(linf(), o, "square"), true, false, 1.0});
  const AnySpace bs = balls();
  out.push_back({"ball size", lift_fn(bs, ball_size(BallSpace(2, 3.0))), true, false, 3.0});
  out.push_back({"ball d(.,c)", dist(bs, AnyPoint(Ball({0, 0}, 2.0))), true, false, 2.0});
  const AnySpace is = intervals();
  out.push_back({"interval lebesgue", lift_fn(is, interval_length(IntervalSpace())), true, false, 0.5});
  out.push_back({"interval hausdorff", dist(is, AnyPoint(Interval(0.1, 0.3))), true, false, 0.4});
  const AnySpace ps = product();
  out.push_back({"product d(.,q)", dist(ps, AnyPoint(std::make_pair(vec({1, 1}), AnyPoint(Interval(0.2, 0.4))))), true,
                 false, 2.0});
  return out;
}

/// The step x -> [x >= 0] on the real line: quasiconvex but not convex.
inline WFn<AnySpace> step() {
  const AnySpace s = line();
  return WFn<AnySpace>(
      s, "step", [](const AnyPoint& x) { return ExtendedReal(x.as<RealVector>()[0] >= 0.0 ? 1.0 : 0.0); },
      Convexity::unknown);
}

inline std::vector<Entry> planted_entries() {
  const AnySpace e = l2();
  const auto d0 = dist(e, vec({0, 0}));
  std::vector<Entry> out;
  out.push_back({"l2 -d(.,0)",
                 WFn<AnySpace>(
                     e, "-d", [d0](const AnyPoint& x) { return ExtendedReal(-d0(x)); }, Convexity::unknown),
                 false, false, -1.0});
  out.push_back({"line step", step(), false, false, 0.5});
  out.push_back({"l2 sqrt d(.,0)",
                 WFn<AnySpace>(
                     e, "sqrt d", [d0](const AnyPoint& x) { return ExtendedReal(std::sqrt(d0(x))); },
                     Convexity::unknown),
                 false, false, 1.0});
  return out;
}

inline std::vector<Entry> all_entries() {
  auto out = convex_entries();
  for (auto& p : planted_entries()) out.push_back(std::move(p));
  return out;
}

/// Two points of the space where f is finite, for the dyadic check.
inline std::pair<AnyPoint, AnyPoint> finite_pair(const WFn<AnySpace>& f, std::uint64_t seed) {
  Rng rng = sample_rng(seed, 0);
  std::vector<AnyPoint> got;
  for (int k = 0; k < 10000 && got.size() < 2; ++k) {
    AnyPoint x = f.space().sample(rng);
    if (f.evaluate(x).is_finite() && (got.empty() || f.space().distance(got[0], x) > 0.1)) got.push_back(x);
  }
  if (got.size() < 2) throw std::runtime_error("no finite pair for " + f.label());
  return {got[0], got[1]};
}

/// Re-evaluates a W-convexity witness: f(z) > (1 - t) f(x) + t f(y).
inline bool witness_replays(const WFn<AnySpace>& f, const Witness<AnyPoint>& w) {
  const AnySpace& s = f.space();
  const double t = w.param("t");
  const AnyPoint z = combine(s, w.point("x"), w.point("y"), t);
  const double lhs = f(z);
  const double rhs = (1.0 - t) * f(w.point("x")) + t * f(w.point("y"));
  return relative_excess(lhs, rhs) > kDefaultTolerances.eq;
}

}  // namespace catalog
