#pragma once

// W-convex functions and convex sets, and the combinators that preserve
// W-convexity: composition with increasing convex scalar maps, nonnegative
// scaling, sums, conical combinations, finite maxima, pointwise suprema and
// restriction to convex subsets.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wconvex/core.hpp"
#include "wconvex/line_search.hpp"
#include "wconvex/sampling.hpp"
#include "wconvex/spaces/ball.hpp"
#include "wconvex/spaces/euclidean.hpp"
#include "wconvex/spaces/interval.hpp"

namespace wconvex {

// ---------------------------------------------------------------------------
// Extended reals: a finite value or +infinity. Evaluations carry +infinity
// explicitly so the effective domain {x : f(x) < inf} stays observable.

class ExtendedReal {
 public:
  ExtendedReal(double v) : value_(v), infinite_(false) {  // NOLINT(implicit)
    if (std::isnan(v)) throw domain_error("function value is NaN");
    if (std::isinf(v)) {
      if (v < 0) throw domain_error("function value is -infinity");
      infinite_ = true;
    }
  }

  static ExtendedReal infinity() { return ExtendedReal(); }

  bool is_finite() const { return !infinite_; }
  /// +infinity is reported as a floating infinity.
  double value() const { return infinite_ ? std::numeric_limits<double>::infinity() : value_; }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (!a.is_finite() || !b.is_finite()) return infinity();
    return a.value_ + b.value_;
  }
  /// alpha >= 0; 0 * inf = 0.
  friend ExtendedReal operator*(double alpha, ExtendedReal a) {
    if (!a.is_finite()) return alpha == 0.0 ? ExtendedReal(0.0) : infinity();
    return alpha * a.value_;
  }
  friend ExtendedReal max(ExtendedReal a, ExtendedReal b) {
    if (!a.is_finite() || !b.is_finite()) return infinity();
    return std::max(a.value_, b.value_);
  }
  friend bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  ExtendedReal() : value_(0.0), infinite_(true) {}
  double value_;
  bool infinite_;
};

// ---------------------------------------------------------------------------
// Scalar maps g for g(d(x, x0)) and g o f.

class ScalarMap {
 public:
  ScalarMap(std::string name, std::function<double(double)> fn, bool strictly_convex,
            bool strictly_increasing)
      : name_(std::move(name)),
        fn_(std::move(fn)),
        strictly_convex_(strictly_convex),
        strictly_increasing_(strictly_increasing) {}

  static ScalarMap identity() {
    return {"identity", [](double s) { return s; }, false, true};
  }
  /// s^2 on [0, inf), extended by 0 for s < 0 (increasing and convex on R).
  static ScalarMap square() {
    return {"square", [](double s) { return s > 0.0 ? s * s : 0.0; }, true, true};
  }
  /// |s|; increasing on the nonnegative range of a distance.
  static ScalarMap abs() {
    return {"abs", [](double s) { return std::abs(s); }, false, true};
  }
  static ScalarMap exp() {
    return {"exp", [](double s) { return std::exp(s); }, true, true};
  }
  /// s^alpha on [0, inf) with alpha > 1, extended by 0 for s < 0.
  static ScalarMap power(double alpha) {
    if (!(alpha > 1.0)) throw domain_error("power map needs alpha > 1, got " + std::to_string(alpha));
    return {"power(" + format_number(alpha) + ")",
            [alpha](double s) { return s > 0.0 ? std::pow(s, alpha) : 0.0; }, true, true};
  }

  /// Parses "identity", "square", "abs", "exp" or "power:<alpha>".
  static ScalarMap parse(const std::string& tag) {
    if (tag == "identity") return identity();
    if (tag == "square") return square();
    if (tag == "abs") return abs();
    if (tag == "exp") return exp();
    if (tag.rfind("power:", 0) == 0) {
      double alpha = 0.0;
      try {
        alpha = std::stod(tag.substr(6));
      } catch (const std::exception&) {
        throw domain_error("malformed power exponent in '" + tag + "'");
      }
      return power(alpha);
    }
    throw domain_error("unknown scalar map '" + tag +
                       "' (valid: identity, square, abs, exp, power:<alpha>)");
  }

  static std::vector<std::string> kinds() { return {"identity", "square", "abs", "exp", "power:<alpha>"}; }

  double operator()(double s) const { return fn_(s); }
  const std::string& name() const { return name_; }
  bool strictly_convex() const { return strictly_convex_; }
  bool strictly_increasing() const { return strictly_increasing_; }

 private:
  static std::string format_number(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  std::string name_;
  std::function<double(double)> fn_;
  bool strictly_convex_;
  bool strictly_increasing_;
};

// ---------------------------------------------------------------------------
// Functions

/// What a constructor or combinator can promise about its result; verifiers
/// decide what actually holds.
enum class Convexity { unknown, convex, strict };

inline const char* to_string(Convexity c) {
  switch (c) {
    case Convexity::unknown:
      return "unknown";
    case Convexity::convex:
      return "convex";
    case Convexity::strict:
      return "strict";
  }
  return "?";
}

template <ConvexMetricSpace S>
class WFn {
 public:
  using point_type = point_t<S>;
  using Eval = std::function<ExtendedReal(const point_type&)>;

  WFn(S space, std::string label, Eval eval, Convexity claim = Convexity::unknown)
      : space_(std::move(space)), label_(std::move(label)), eval_(std::move(eval)), claim_(claim) {}

  /// Extended-real value; +infinity outside the effective domain.
  ExtendedReal evaluate(const point_type& x) const { return eval_(x); }

  /// Finite value; throws domain_error where the function is +infinity.
  double operator()(const point_type& x) const {
    const ExtendedReal v = eval_(x);
    if (!v.is_finite()) throw domain_error(label_ + ": point outside the effective domain");
    return v.value();
  }

  const S& space() const { return space_; }
  const std::string& label() const { return label_; }
  Convexity claim() const { return claim_; }

  WFn relabel(std::string label) const { return WFn(space_, std::move(label), eval_, claim_); }
  WFn with_claim(Convexity c) const { return WFn(space_, label_, eval_, c); }

 private:
  S space_;
  std::string label_;
  Eval eval_;
  Convexity claim_;
};

template <ConvexMetricSpace S>
bool same_space(const S& a, const S& b) {
  return a.describe() == b.describe();
}

// ---------------------------------------------------------------------------
// Convex sets

template <ConvexMetricSpace S>
class ConvexSet {
 public:
  using point_type = point_t<S>;
  using Contains = std::function<bool(const point_type&)>;
  using Sampler = std::function<std::optional<point_type>(Rng&)>;

  ConvexSet(S space, std::string label, Contains contains, Sampler sampler)
      : space_(std::move(space)),
        label_(std::move(label)),
        contains_(std::move(contains)),
        sampler_(std::move(sampler)) {}

  bool contains(const point_type& x) const { return contains_(x); }
  /// A member, or nullopt when the sampler's budget is exhausted.
  std::optional<point_type> sample(Rng& rng) const { return sampler_(rng); }

  const S& space() const { return space_; }
  const std::string& label() const { return label_; }

  /// Open-set surrogates: width of the excluded boundary band and the
  /// signed depth of a point below the nominal boundary.
  double open_band() const { return open_band_; }
  std::optional<double> depth(const point_type& x) const {
    if (!depth_) return std::nullopt;
    return depth_(x);
  }
  ConvexSet with_open_boundary(double band, std::function<double(const point_type&)> depth) const {
    ConvexSet c = *this;
    c.open_band_ = band;
    c.depth_ = std::move(depth);
    return c;
  }

 private:
  S space_;
  std::string label_;
  Contains contains_;
  Sampler sampler_;
  double open_band_ = 0.0;
  std::function<double(const point_type&)> depth_;
};

inline constexpr double kMembershipTol = 1e-14;

/// Optional domain argument; never used for template argument deduction.
template <ConvexMetricSpace S>
using OptionalSet = std::type_identity_t<std::optional<ConvexSet<S>>>;

template <ConvexMetricSpace S>
ConvexSet<S> whole_space(const S& space) {
  return ConvexSet<S>(
      space, "whole_space", [](const point_t<S>&) { return true; },
      [space](Rng& rng) -> std::optional<point_t<S>> { return space.sample(rng); });
}

namespace detail {

/// Member of the closed ball B[center, radius]: a third of the draws land on
/// the sphere, built exactly from d(c, W(c, z; s)) = s d(c, z).
template <ConvexMetricSpace S>
point_t<S> sample_in_ball(const S& space, const point_t<S>& center, double radius, Rng& rng) {
  const point_t<S> z = space.sample(rng);
  const double d = space.distance(center, z);
  if (d == 0.0) return center;
  const double s = std::min(1.0, radius / d);
  if (uniform(rng) < 1.0 / 3.0) return combine(space, center, z, s);
  return combine(space, center, z, s * uniform(rng));
}

}  // namespace detail

/// Closed ball B[center, radius]; convex in every convex metric space.
template <ConvexMetricSpace S>
ConvexSet<S> ball_set(const S& space, point_t<S> center, double radius) {
  if (!(radius > 0.0)) throw domain_error("ball set radius must be > 0");
  return ConvexSet<S>(
      space, "ball(r=" + std::to_string(radius) + ")",
      [space, center, radius](const point_t<S>& x) {
        return space.distance(center, x) <= radius * (1.0 + kMembershipTol) + kMembershipTol;
      },
      [space, center, radius](Rng& rng) -> std::optional<point_t<S>> {
        return detail::sample_in_ball(space, center, radius, rng);
      });
}

/// Open-ball surrogate: membership excludes the band of width `band` below
/// the nominal sphere of radius `radius`.
template <ConvexMetricSpace S>
ConvexSet<S> open_ball_set(const S& space, point_t<S> center, double radius, double band) {
  if (!(band > 0.0 && band < radius)) throw domain_error("open ball band must lie in (0, radius)");
  const double inner = radius - band;
  ConvexSet<S> set(
      space, "open_ball(r=" + std::to_string(radius) + ")",
      [space, center, inner](const point_t<S>& x) { return space.distance(center, x) < inner; },
      [space, center, inner](Rng& rng) -> std::optional<point_t<S>> {
        // Stay strictly inside: scale the sphere draws just below `inner`.
        return detail::sample_in_ball(space, center, inner * (1.0 - 1e-9), rng);
      });
  return set.with_open_boundary(
      band, [space, center, radius](const point_t<S>& x) { return radius - space.distance(center, x); });
}

/// The W-segment L(a, b).
template <ConvexMetricSpace S>
ConvexSet<S> segment_set(const S& space, point_t<S> a, point_t<S> b) {
  const double len = space.distance(a, b);
  std::function<bool(const point_t<S>&)> contains;
  if constexpr (std::is_same_v<point_t<S>, RealVector>) {
    // Linear segment: closed-form parameter of the nearest point.
    contains = [a, b, len](const RealVector& x) {
      vec::require_same_size(a, x);
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        num += (x[i] - a[i]) * (b[i] - a[i]);
        den += (b[i] - a[i]) * (b[i] - a[i]);
      }
      const double s = den == 0.0 ? 0.0 : std::clamp(num / den, 0.0, 1.0);
      double dev = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        dev = std::max(dev, std::abs(x[i] - ((1.0 - s) * a[i] + s * b[i])));
      }
      return dev <= kMembershipTol * (1.0 + len);
    };
  } else {
    contains = [space, a, b, len](const point_t<S>& x) {
      const auto m = golden_section_on_segment(
          [&](double t) { return space.distance(x, combine(space, a, b, t)); }, 1e-14);
      return m.value <= 1e-10 * (1.0 + len);
    };
  }
  return ConvexSet<S>(space, "segment", std::move(contains),
                      [space, a, b](Rng& rng) -> std::optional<point_t<S>> {
                        const double u = uniform(rng);
                        // Endpoints are hit with probability 1/8 each.
                        if (u < 0.125) return a;
                        if (u < 0.25) return b;
                        return combine(space, a, b, uniform(rng));
                      });
}

/// Axis-aligned box in R^n. The sampler favours faces and vertices.
inline ConvexSet<EuclideanSpace> box_set(const EuclideanSpace& space, RealVector lower, RealVector upper) {
  if (lower.size() != space.dim() || upper.size() != space.dim()) {
    throw type_error("box bounds must have the space dimension");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) throw domain_error("box lower bound exceeds upper bound");
  }
  return ConvexSet<EuclideanSpace>(
      space, "box",
      [lower, upper](const RealVector& x) {
        vec::require_same_size(lower, x);
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double slack = kMembershipTol * (1.0 + std::abs(upper[i] - lower[i]));
          if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
        }
        return true;
      },
      [lower, upper](Rng& rng) -> std::optional<RealVector> {
        RealVector x(lower.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(rng, lower[i], upper[i]);
        const double mode = uniform(rng);
        if (mode < 0.125) {
          for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(rng) < 0.5 ? lower[i] : upper[i];
        } else if (mode < 0.625) {
          const std::size_t i = uniform_index(rng, x.size());
          x[i] = uniform(rng) < 0.5 ? lower[i] : upper[i];
        }
        return x;
      });
}

/// Intersection; the sampler rejects draws of the first set that miss the
/// others, giving up after `budget` attempts.
template <ConvexMetricSpace S>
ConvexSet<S> intersection_set(std::vector<ConvexSet<S>> sets, std::size_t budget = 2000) {
  if (sets.empty()) throw domain_error("intersection of an empty family");
  std::string label = "intersection(";
  for (std::size_t i = 0; i < sets.size(); ++i) label += (i ? "," : "") + sets[i].label();
  label += ")";
  const S space = sets.front().space();
  auto members = std::make_shared<const std::vector<ConvexSet<S>>>(std::move(sets));
  return ConvexSet<S>(
      space, label,
      [members](const point_t<S>& x) {
        return std::all_of(members->begin(), members->end(), [&](const auto& c) { return c.contains(x); });
      },
      [members, budget](Rng& rng) -> std::optional<point_t<S>> {
        for (std::size_t k = 0; k < budget; ++k) {
          auto x = members->front().sample(rng);
          if (!x) continue;
          bool ok = true;
          for (std::size_t i = 1; i < members->size() && ok; ++i) ok = (*members)[i].contains(*x);
          if (ok) return x;
        }
        return std::nullopt;
      });
}

/// S_h(f) = { x : f(x) <= h }, sampled by rejection from the space.
template <ConvexMetricSpace S>
ConvexSet<S> sublevel_set(const WFn<S>& f, double h, std::size_t budget = 2000) {
  const S space = f.space();
  return ConvexSet<S>(
      space, "sublevel(" + f.label() + "," + std::to_string(h) + ")",
      [f, h](const point_t<S>& x) {
        const ExtendedReal v = f.evaluate(x);
        return v.is_finite() && v.value() <= h;
      },
      [f, h, space, budget](Rng& rng) -> std::optional<point_t<S>> {
        for (std::size_t k = 0; k < budget; ++k) {
          auto x = space.sample(rng);
          const ExtendedReal v = f.evaluate(x);
          if (v.is_finite() && v.value() <= h) return x;
        }
        return std::nullopt;
      });
}

// ---------------------------------------------------------------------------
// Constructors

/// x -> g(d(x, x0)). W-convex for increasing convex g; strictly W-convex in
/// strictly convex spaces when g is strictly convex.
template <ConvexMetricSpace S>
WFn<S> distance_to_point(const S& space, point_t<S> x0, const ScalarMap& g = ScalarMap::identity()) {
  const std::string label = g.name() == "identity" ? "d(.,x0)" : g.name() + "(d(.,x0))";
  return WFn<S>(
      space, label, [space, x0, g](const point_t<S>& x) { return ExtendedReal(g(space.distance(x, x0))); },
      g.strictly_convex() ? Convexity::strict : Convexity::convex);
}

/// Arbitrary callable, e.g. for planted counterexamples.
template <ConvexMetricSpace S, class F>
WFn<S> from_callable(const S& space, std::string label, F fn, Convexity claim = Convexity::unknown) {
  return WFn<S>(
      space, std::move(label), [fn](const point_t<S>& x) { return ExtendedReal(fn(x)); }, claim);
}

/// 0 on C and +infinity elsewhere.
template <ConvexMetricSpace S>
WFn<S> indicator(const ConvexSet<S>& c) {
  return WFn<S>(
      c.space(), "indicator(" + c.label() + ")",
      [c](const point_t<S>& x) { return c.contains(x) ? ExtendedReal(0.0) : ExtendedReal::infinity(); },
      Convexity::convex);
}

// ---------------------------------------------------------------------------
// Combinators

namespace detail {

template <ConvexMetricSpace S>
void require_common_space(const std::vector<WFn<S>>& fs, const char* what) {
  if (fs.empty()) throw domain_error(std::string(what) + ": empty function list");
  for (const auto& f : fs) {
    if (!same_space(f.space(), fs.front().space())) {
      throw type_error(std::string(what) + ": functions live on different spaces (" +
                       fs.front().space().describe() + " vs " + f.space().describe() + ")");
    }
  }
}

inline Convexity weakest(Convexity a, Convexity b) { return a < b ? a : b; }

template <ConvexMetricSpace S>
std::string join_labels(const std::vector<WFn<S>>& fs) {
  std::string s;
  for (std::size_t i = 0; i < fs.size(); ++i) s += (i ? "," : "") + fs[i].label();
  return s;
}

}  // namespace detail

/// g o f. Strict when g is strictly convex, or f is strict and g strictly
/// increasing.
template <ConvexMetricSpace S>
WFn<S> compose_increasing_convex(const WFn<S>& f, const ScalarMap& g) {
  Convexity claim = f.claim();
  if (claim != Convexity::unknown &&
      (g.strictly_convex() || (f.claim() == Convexity::strict && g.strictly_increasing()))) {
    claim = Convexity::strict;
  } else if (claim == Convexity::strict) {
    claim = Convexity::convex;
  }
  return WFn<S>(
      f.space(), g.name() + "(" + f.label() + ")",
      [f, g](const point_t<S>& x) {
        const ExtendedReal v = f.evaluate(x);
        if (!v.is_finite()) return ExtendedReal::infinity();
        return ExtendedReal(g(v.value()));
      },
      claim);
}

template <ConvexMetricSpace S>
WFn<S> scale(const WFn<S>& f, double alpha) {
  if (!(alpha >= 0.0)) throw domain_error("scale: alpha must be >= 0");
  const Convexity claim = alpha == 0.0 ? detail::weakest(f.claim(), Convexity::convex) : f.claim();
  return WFn<S>(
      f.space(), std::to_string(alpha) + "*" + f.label(),
      [f, alpha](const point_t<S>& x) { return alpha * f.evaluate(x); }, claim);
}

template <ConvexMetricSpace S>
WFn<S> conical(const std::vector<WFn<S>>& fs, const std::vector<double>& alphas) {
  detail::require_common_space(fs, "conical");
  if (alphas.size() != fs.size()) throw domain_error("conical: one weight per function required");
  Convexity claim = Convexity::strict;
  bool any_strict = false;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!(alphas[i] >= 0.0)) throw domain_error("conical: weights must be >= 0");
    claim = detail::weakest(claim, fs[i].claim() == Convexity::strict ? Convexity::strict
                                                                       : fs[i].claim());
    any_strict = any_strict || (fs[i].claim() == Convexity::strict && alphas[i] > 0.0);
  }
  if (claim != Convexity::unknown) claim = any_strict ? Convexity::strict : Convexity::convex;
  return WFn<S>(
      fs.front().space(), "conical(" + detail::join_labels(fs) + ")",
      [fs, alphas](const point_t<S>& x) {
        ExtendedReal acc(0.0);
        for (std::size_t i = 0; i < fs.size(); ++i) acc = acc + alphas[i] * fs[i].evaluate(x);
        return acc;
      },
      claim);
}

template <ConvexMetricSpace S>
WFn<S> sum(const std::vector<WFn<S>>& fs) {
  detail::require_common_space(fs, "sum");
  return conical(fs, std::vector<double>(fs.size(), 1.0)).relabel("sum(" + detail::join_labels(fs) + ")");
}

template <ConvexMetricSpace S>
WFn<S> max_of(const std::vector<WFn<S>>& fs) {
  detail::require_common_space(fs, "max");
  Convexity claim = Convexity::strict;
  for (const auto& f : fs) claim = detail::weakest(claim, f.claim());
  return WFn<S>(
      fs.front().space(), "max(" + detail::join_labels(fs) + ")",
      [fs](const point_t<S>& x) {
        ExtendedReal acc = fs.front().evaluate(x);
        for (std::size_t i = 1; i < fs.size(); ++i) acc = max(acc, fs[i].evaluate(x));
        return acc;
      },
      claim);
}

/// Pointwise supremum of a finite family. The result is +infinity wherever a
/// member is; its finite part is the domain on which the supremum is
/// W-convex.
template <ConvexMetricSpace S>
WFn<S> sup_family(const std::vector<WFn<S>>& fs) {
  detail::require_common_space(fs, "sup");
  if (fs.size() == 1) return fs.front();
  return max_of(fs).relabel("sup(" + detail::join_labels(fs) + ")");
}

/// f on C; +infinity (and domain_error through operator()) outside C.
template <ConvexMetricSpace S>
WFn<S> restrict(const WFn<S>& f, const ConvexSet<S>& c) {
  if (!same_space(f.space(), c.space())) throw type_error("restrict: set and function on different spaces");
  return WFn<S>(
      f.space(), f.label() + "|" + c.label(),
      [f, c](const point_t<S>& x) { return c.contains(x) ? f.evaluate(x) : ExtendedReal::infinity(); },
      f.claim());
}

// ---------------------------------------------------------------------------
// Functions tied to a particular space family

/// Lebesgue measure of an interval, b - a. Affine along W-segments.
inline WFn<IntervalSpace> interval_length(const IntervalSpace& space) {
  return WFn<IntervalSpace>(
      space, "lebesgue", [](const Interval& i) { return ExtendedReal(i.length()); }, Convexity::convex);
}

/// ||xi|| + |r| on the ball space.
inline WFn<BallSpace> ball_size(const BallSpace& space) {
  return WFn<BallSpace>(
      space, "ball_size",
      [](const Ball& b) { return ExtendedReal(vec::norm(b.center(), Norm::l2) + std::abs(b.radius())); },
      Convexity::convex);
}

}  // namespace wconvex
