#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wconvex/core.hpp"
#include "wconvex/sampling.hpp"

namespace wconvex {

using RealVector = std::vector<double>;

enum class Norm { l1, l2, linf };

inline std::string to_string(Norm n) {
  switch (n) {
    case Norm::l1:
      return "l1";
    case Norm::l2:
      return "l2";
    case Norm::linf:
      return "linf";
  }
  return "?";
}

inline Norm norm_from_string(const std::string& s) {
  if (s == "l1" || s == "1") return Norm::l1;
  if (s == "l2" || s == "2") return Norm::l2;
  if (s == "linf" || s == "inf") return Norm::linf;
  throw domain_error("unknown norm '" + s + "' (valid: l1, l2, linf)");
}

namespace vec {

inline void require_same_size(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) {
    throw type_error("vector dimension mismatch: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
}

inline double norm(const RealVector& v, Norm n) {
  double acc = 0.0;
  switch (n) {
    case Norm::l1:
      for (double c : v) acc += std::abs(c);
      return acc;
    case Norm::l2: {
      // hypot-style scaling keeps large coordinates from overflowing.
      double scale = 0.0;
      for (double c : v) scale = std::max(scale, std::abs(c));
      if (scale == 0.0) return 0.0;
      for (double c : v) acc += (c / scale) * (c / scale);
      return scale * std::sqrt(acc);
    }
    case Norm::linf:
      for (double c : v) acc = std::max(acc, std::abs(c));
      return acc;
  }
  return acc;
}

inline double distance(const RealVector& a, const RealVector& b, Norm n) {
  require_same_size(a, b);
  RealVector diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return norm(diff, n);
}

/// (1 - t) x + t y with exact endpoints at t = 0 and t = 1.
inline RealVector lerp(const RealVector& x, const RealVector& y, double t) {
  require_same_size(x, y);
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  RealVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (1.0 - t) * x[i] + t * y[i];
  return out;
}

inline RealVector from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) throw type_error("expected a real array, got " + j.dump());
  RealVector v;
  v.reserve(j.size());
  for (const auto& c : j) {
    if (!c.is_number()) throw type_error("expected a real array, got " + j.dump());
    v.push_back(c.get<double>());
  }
  if (v.size() != dim) {
    throw type_error("expected " + std::to_string(dim) + " coordinates, got " +
                     std::to_string(v.size()));
  }
  return v;
}

}  // namespace vec

/// R^n with an l1, l2 or l-infinity norm and the linear convex structure
/// W(x, y; t) = (1 - t) x + t y.
class EuclideanSpace {
 public:
  using point_type = RealVector;

  explicit EuclideanSpace(std::size_t dim, Norm norm = Norm::l2, double sample_radius = 10.0)
      : dim_(dim), norm_(norm), sample_radius_(sample_radius) {
    if (dim == 0) throw domain_error("euclidean space: dimension must be >= 1");
    if (!(sample_radius > 0.0)) throw domain_error("euclidean space: sample radius must be > 0");
  }

  std::size_t dim() const { return dim_; }
  std::size_t dim_hint() const { return dim_; }
  Norm norm_kind() const { return norm_; }
  double sample_radius() const { return sample_radius_; }

  double norm(const point_type& v) const {
    check(v);
    return vec::norm(v, norm_);
  }

  double distance(const point_type& a, const point_type& b) const {
    check(a);
    check(b);
    return vec::distance(a, b, norm_);
  }

  point_type combine(const point_type& x, const point_type& y, double t) const {
    check(x);
    check(y);
    return vec::lerp(x, y, t);
  }

  /// xi = y + (x - y) / lambda, so that (1 - lambda) y + lambda xi = x.
  std::optional<point_type> extend(const point_type& y, const point_type& x, double lambda) const {
    check(x);
    check(y);
    point_type xi(dim_);
    for (std::size_t i = 0; i < dim_; ++i) xi[i] = y[i] + (x[i] - y[i]) / lambda;
    return xi;
  }

  point_type sample(Rng& rng) const {
    point_type p(dim_);
    for (auto& c : p) c = uniform(rng, -sample_radius_, sample_radius_);
    return p;
  }

  std::string describe() const {
    return "euclidean(n=" + std::to_string(dim_) + "," + to_string(norm_) + ")";
  }

  json to_json(const point_type& p) const { return p; }
  point_type from_json(const json& j) const { return vec::from_json(j, dim_); }

  bool operator==(const EuclideanSpace& o) const { return dim_ == o.dim_ && norm_ == o.norm_; }

 private:
  void check(const point_type& p) const {
    if (p.size() != dim_) {
      throw type_error("point of dimension " + std::to_string(p.size()) + " used in " + describe());
    }
  }

  std::size_t dim_;
  Norm norm_;
  double sample_radius_;
};

inline EuclideanSpace euclidean_space(std::size_t dim, Norm norm = Norm::l2) {
  return EuclideanSpace(dim, norm);
}

inline EuclideanSpace real_line() { return EuclideanSpace(1, Norm::l2); }

}  // namespace wconvex
