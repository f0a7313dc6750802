#pragma once

// Closed sub-intervals [a, b] of [0, 1] with the Hausdorff distance and
// endpoint-wise linear interpolation.

#include <algorithm>
#include <cmath>
#include <string>

#include "wconvex/core.hpp"
#include "wconvex/sampling.hpp"

namespace wconvex {

class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!(a >= 0.0 && a <= b && b <= 1.0)) {
      throw domain_error("interval [" + std::to_string(a) + ", " + std::to_string(b) +
                         "] must satisfy 0 <= a <= b <= 1");
    }
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double length() const { return b_ - a_; }

 private:
  double a_;
  double b_;
};

/// Closed form of the Hausdorff distance between two closed intervals.
inline double hausdorff_interval_distance(const Interval& i, const Interval& j) {
  return std::max(std::abs(i.a() - j.a()), std::abs(i.b() - j.b()));
}

class IntervalSpace {
 public:
  using point_type = Interval;

  std::size_t dim_hint() const { return 2; }

  double distance(const Interval& x, const Interval& y) const {
    return hausdorff_interval_distance(x, y);
  }

  Interval combine(const Interval& x, const Interval& y, double t) const {
    if (t == 0.0) return x;
    if (t == 1.0) return y;
    // Rounding may push an endpoint one ulp outside [0, 1] or past the
    // other endpoint; the exact result never does.
    const double a = std::clamp((1.0 - t) * x.a() + t * y.a(), 0.0, 1.0);
    const double b = std::clamp((1.0 - t) * x.b() + t * y.b(), a, 1.0);
    return Interval(a, b);
  }

  Interval sample(Rng& rng) const {
    double a = uniform(rng);
    double b = uniform(rng);
    if (a > b) std::swap(a, b);
    // Singletons are valid points and worth hitting.
    if (uniform(rng) < 0.125) b = a;
    return Interval(a, b);
  }

  std::string describe() const { return "interval"; }

  json to_json(const Interval& i) const { return {{"a", i.a()}, {"b", i.b()}}; }

  Interval from_json(const json& j) const {
    if (!j.is_object() || !j.contains("a") || !j.contains("b")) {
      throw type_error("interval point must be {a, b}, got " + j.dump());
    }
    return Interval(j.at("a").get<double>(), j.at("b").get<double>());
  }

  bool operator==(const IntervalSpace&) const { return true; }
};

inline IntervalSpace interval_space() { return {}; }

}  // namespace wconvex
