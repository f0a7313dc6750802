#pragma once

// X x Y with the coordinatewise convex structure. The sum metric d1 is the
// one the convex-structure property is established for; the Euclidean
// combination d2 is provided only as a diagnostic.

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "wconvex/core.hpp"

namespace wconvex {

enum class ProductMetric { d1, d2 };

template <ConvexMetricSpace L, ConvexMetricSpace R>
class ProductSpace {
 public:
  using point_type = std::pair<point_t<L>, point_t<R>>;

  ProductSpace(L left, R right, ProductMetric metric = ProductMetric::d1)
      : left_(std::move(left)), right_(std::move(right)), metric_(metric) {}

  const L& left() const { return left_; }
  const R& right() const { return right_; }
  ProductMetric metric() const { return metric_; }

  std::size_t dim_hint() const { return left_.dim_hint() + right_.dim_hint(); }

  double distance(const point_type& a, const point_type& b) const {
    const double dl = left_.distance(a.first, b.first);
    const double dr = right_.distance(a.second, b.second);
    return metric_ == ProductMetric::d1 ? dl + dr : std::hypot(dl, dr);
  }

  point_type combine(const point_type& x, const point_type& y, double t) const {
    return {left_.combine(x.first, y.first, t), right_.combine(x.second, y.second, t)};
  }

  bool supports_extend() const { return wconvex::supports_extend(left_) && wconvex::supports_extend(right_); }

  std::optional<point_type> extend(const point_type& y, const point_type& x, double lambda) const {
    auto l = wconvex::extend(left_, y.first, x.first, lambda);
    if (!l) return std::nullopt;
    auto r = wconvex::extend(right_, y.second, x.second, lambda);
    if (!r) return std::nullopt;
    return point_type{std::move(*l), std::move(*r)};
  }

  point_type sample(Rng& rng) const {
    auto l = left_.sample(rng);
    auto r = right_.sample(rng);
    return {std::move(l), std::move(r)};
  }

  std::string describe() const {
    return std::string("product(") + (metric_ == ProductMetric::d1 ? "d1" : "d2") + "," +
           left_.describe() + "," + right_.describe() + ")";
  }

  json to_json(const point_type& p) const {
    return json::array({left_.to_json(p.first), right_.to_json(p.second)});
  }

  point_type from_json(const json& j) const {
    if (!j.is_array() || j.size() != 2) {
      throw type_error("product point must be a two-element array, got " + j.dump());
    }
    return {left_.from_json(j[0]), right_.from_json(j[1])};
  }

 private:
  L left_;
  R right_;
  ProductMetric metric_;
};

template <ConvexMetricSpace L, ConvexMetricSpace R>
ProductSpace<L, R> product_space(L left, R right, ProductMetric metric = ProductMetric::d1) {
  return ProductSpace<L, R>(std::move(left), std::move(right), metric);
}

}  // namespace wconvex
