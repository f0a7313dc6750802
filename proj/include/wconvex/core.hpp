#pragma once

// Space abstraction for convex metric spaces: a metric d together with a
// single-valued convex structure W(x, y; t) satisfying
//
//     d(u, W(x, y; t)) <= (1 - t) d(u, x) + t d(u, y)    for all u.
//
// Concrete spaces are plain value types modelling `ConvexMetricSpace`.
// Everything else in the library is templated on that concept.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

namespace wconvex {

using json = nlohmann::json;
using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Errors

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Incompatible point payloads or functions living on different spaces.
class type_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested capability (e.g. geodesic extension) is not offered by a space.
class unsupported_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Resource limit exceeded (e.g. dyadic grid level too large).
class resource_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

// ---------------------------------------------------------------------------
// Tolerances

struct Tolerances {
  /// Relative equality tolerance: a check `lhs <= rhs` passes when
  /// (lhs - rhs) / (1 + |rhs|) <= eq.
  double eq = 1e-9;
  /// Margin for strict inequalities: `lhs < rhs` passes only when
  /// lhs <= rhs - strict * (1 + |rhs|).
  double strict = 1e-7;
  /// Pairs closer than this are degenerate and skipped by verifiers.
  double degenerate = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

/// (lhs - rhs) / (1 + |rhs|). Positive values are violations of lhs <= rhs.
inline double relative_excess(double lhs, double rhs) {
  return (lhs - rhs) / (1.0 + std::abs(rhs));
}

// ---------------------------------------------------------------------------
// Concepts

template <class S>
concept ConvexMetricSpace =
    std::copy_constructible<S> &&
    requires(const S& s, const typename S::point_type& p, double t, Rng& rng,
             const json& j) {
      typename S::point_type;
      { s.distance(p, p) } -> std::convertible_to<double>;
      { s.combine(p, p, t) } -> std::same_as<typename S::point_type>;
      { s.sample(rng) } -> std::same_as<typename S::point_type>;
      { s.describe() } -> std::convertible_to<std::string>;
      { s.dim_hint() } -> std::convertible_to<std::size_t>;
      { s.to_json(p) } -> std::convertible_to<json>;
      { s.from_json(j) } -> std::same_as<typename S::point_type>;
    };

/// Spaces that may offer the extension property: for y, x and lambda in
/// (0, 1) there is xi with W(y, xi; lambda) = x. `extend` returns nullopt
/// when no such xi exists in the space.
template <class S>
concept ExtendableSpace =
    ConvexMetricSpace<S> &&
    requires(const S& s, const typename S::point_type& p, double t) {
      { s.extend(p, p, t) } -> std::same_as<std::optional<typename S::point_type>>;
    };

template <ConvexMetricSpace S>
using point_t = typename S::point_type;

// ---------------------------------------------------------------------------
// Checked front-ends

template <ConvexMetricSpace S>
double distance(const S& space, const point_t<S>& a, const point_t<S>& b) {
  return space.distance(a, b);
}

template <ConvexMetricSpace S>
point_t<S> combine(const S& space, const point_t<S>& x, const point_t<S>& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw domain_error("combine: t must lie in [0, 1], got " + std::to_string(t));
  }
  return space.combine(x, y, t);
}

/// Returns xi with W(y, xi; lambda) = x, or nullopt when the space lacks the
/// extension capability (or no such xi exists for these arguments).
template <ConvexMetricSpace S>
std::optional<point_t<S>> extend(const S& space, const point_t<S>& y, const point_t<S>& x,
                                 double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw domain_error("extend: lambda must lie in (0, 1), got " + std::to_string(lambda));
  }
  if constexpr (ExtendableSpace<S>) {
    return space.extend(y, x, lambda);
  } else {
    return std::nullopt;
  }
}

template <ConvexMetricSpace S>
bool supports_extend(const S& space) {
  if constexpr (requires { space.supports_extend(); }) {
    return space.supports_extend();
  } else {
    return ExtendableSpace<S>;
  }
}

/// Point equality is metric equality, never payload comparison.
template <ConvexMetricSpace S>
bool same_point(const S& space, const point_t<S>& a, const point_t<S>& b,
                double eps = kDefaultTolerances.eq) {
  return space.distance(a, b) <= eps;
}

// ---------------------------------------------------------------------------
// Segment L(x, y) = { W(x, y; lambda) : lambda in [0, 1] }

template <ConvexMetricSpace S>
class Segment {
 public:
  using point_type = point_t<S>;

  Segment(S space, point_type x, point_type y)
      : space_(std::move(space)), x_(std::move(x)), y_(std::move(y)) {
    length_ = space_.distance(x_, y_);
    if (!(length_ > kDefaultTolerances.degenerate)) {
      throw domain_error("segment: endpoints coincide (d(x, y) = 0)");
    }
  }

  const S& space() const { return space_; }
  const point_type& from() const { return x_; }
  const point_type& to() const { return y_; }
  double length() const { return length_; }

  point_type at(double lambda) const { return combine(space_, x_, y_, lambda); }

 private:
  S space_;
  point_type x_;
  point_type y_;
  double length_ = 0.0;
};

}  // namespace wconvex
