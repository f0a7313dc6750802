#pragma once

// The space of closed balls B(xi, r) with the metric
//     d(B(xi1, r1), B(xi2, r2)) = ||xi1 - xi2||_2 + |r1 - r2|
// and centers and radii interpolated linearly.

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "wconvex/core.hpp"
#include "wconvex/spaces/euclidean.hpp"

namespace wconvex {

class Ball {
 public:
  Ball(RealVector center, double radius) : center_(std::move(center)), radius_(radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw domain_error("ball radius must be > 0, got " + std::to_string(radius));
    }
  }

  const RealVector& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  RealVector center_;
  double radius_;
};

class BallSpace {
 public:
  using point_type = Ball;

  explicit BallSpace(std::size_t center_dim = 3, double sample_radius = 5.0)
      : dim_(center_dim), sample_radius_(sample_radius) {
    if (center_dim == 0) throw domain_error("ball space: center dimension must be >= 1");
  }

  std::size_t center_dim() const { return dim_; }
  std::size_t dim_hint() const { return dim_ + 1; }

  double distance(const Ball& a, const Ball& b) const {
    check(a);
    check(b);
    return vec::distance(a.center(), b.center(), Norm::l2) + std::abs(a.radius() - b.radius());
  }

  Ball combine(const Ball& x, const Ball& y, double t) const {
    check(x);
    check(y);
    if (t == 0.0) return x;
    if (t == 1.0) return y;
    return Ball(vec::lerp(x.center(), y.center(), t), (1.0 - t) * x.radius() + t * y.radius());
  }

  /// Linear extension in (center, radius); nullopt when the extended radius
  /// would not be positive.
  std::optional<Ball> extend(const Ball& y, const Ball& x, double lambda) const {
    check(x);
    check(y);
    const double r = y.radius() + (x.radius() - y.radius()) / lambda;
    if (!(r > 0.0)) return std::nullopt;
    RealVector c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      c[i] = y.center()[i] + (x.center()[i] - y.center()[i]) / lambda;
    }
    return Ball(std::move(c), r);
  }

  Ball sample(Rng& rng) const {
    RealVector c(dim_);
    for (auto& v : c) v = uniform(rng, -sample_radius_, sample_radius_);
    return Ball(std::move(c), uniform(rng, 0.05, sample_radius_));
  }

  std::string describe() const { return "ball(n=" + std::to_string(dim_) + ")"; }

  json to_json(const Ball& b) const { return {{"center", b.center()}, {"radius", b.radius()}}; }

  Ball from_json(const json& j) const {
    if (!j.is_object() || !j.contains("center") || !j.contains("radius")) {
      throw type_error("ball point must be {center: [...], radius: r}, got " + j.dump());
    }
    return Ball(vec::from_json(j.at("center"), dim_), j.at("radius").get<double>());
  }

  bool operator==(const BallSpace& o) const { return dim_ == o.dim_; }

 private:
  void check(const Ball& b) const {
    if (b.center().size() != dim_) {
      throw type_error("ball center of dimension " + std::to_string(b.center().size()) +
                       " used in " + describe());
    }
  }

  std::size_t dim_;
  double sample_radius_;
};

inline BallSpace ball_space(std::size_t center_dim = 3) { return BallSpace(center_dim); }

}  // namespace wconvex
