#pragma once

// Property verifiers for W-convex functions and convex metric spaces.
//
// Each verifier draws samples from a seeded stream and returns a Verdict:
// passed, failed with a replayable witness, or inconclusive when too few
// samples met the sampling preconditions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wconvex/core.hpp"
#include "wconvex/functions.hpp"
#include "wconvex/sampling.hpp"
#include "wconvex/spaces/euclidean.hpp"
#include "wconvex/spaces/product.hpp"
#include "wconvex/verdict.hpp"

namespace wconvex {

namespace detail {

template <ConvexMetricSpace S>
void require_function_space(const S& space, const WFn<S>& f, const char* what) {
  if (!same_space(space, f.space())) {
    throw type_error(std::string(what) + ": function '" + f.label() + "' lives on " + f.space().describe() +
                     ", not " + space.describe());
  }
}

template <ConvexMetricSpace S>
std::optional<point_t<S>> draw_point(const S& space, const OptionalSet<S>& domain, Rng& rng) {
  if (domain) return domain->sample(rng);
  return space.sample(rng);
}

/// Point at distance rho from x0 in the direction of z: W(x0, z; rho / d)
/// when z lies beyond the sphere, otherwise the extension xi with
/// W(x0, xi; d / rho) = z. Both are exact by the segment identities.
template <ConvexMetricSpace S>
std::optional<point_t<S>> sphere_point(const S& space, const point_t<S>& x0, const point_t<S>& z, double rho) {
  const double d = space.distance(x0, z);
  if (!(d > 0.0)) return std::nullopt;
  if (rho <= d) return combine(space, x0, z, rho / d);
  return extend(space, x0, z, d / rho);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// W-convexity

/// f(W(x, y; t)) <= (1 - t) f(x) + t f(y) on sampled (x, y, t). Samples
/// where the right-hand side is +infinity are skipped.
template <ConvexMetricSpace S>
Verdict<point_t<S>> verify_wconvex(const S& space, const WFn<S>& f, std::size_t n, std::uint64_t seed,
                                   const OptionalSet<S>& domain = std::nullopt,
                                   const RunOptions& opts = {}) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "verify_wconvex");
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const auto x = detail::draw_point(space, domain, rng);
    const auto y = detail::draw_point(space, domain, rng);
    if (!x || !y) return ProbeOutcome::skip();
    const double t = draw_t(rng, i);
    const ExtendedReal fx = f.evaluate(*x);
    const ExtendedReal fy = f.evaluate(*y);
    if (!fx.is_finite() || !fy.is_finite()) return ProbeOutcome::skip();
    const P z = combine(space, *x, *y, t);
    const double lhs = f.evaluate(z).value();
    const double rhs = (1.0 - t) * fx.value() + t * fy.value();
    if (w) {
      w->point("x", *x).point("y", *y).point("z", z);
      w->param("t", t).param("lhs", lhs).param("rhs", rhs);
    }
    return ProbeOutcome::score(relative_excess(lhs, rhs));
  };
  return run_probes<P>("wconvex", n, seed, opts.tol.eq, probe, opts);
}

/// Strict inequality with margin: f(W(x, y; t)) <= rhs - strict (1 + |rhs|)
/// for d(x, y) >= separation and t in [0.05, 0.95]. Scores are shifted by
/// the margin, so passing means worst_violation <= 0.
template <ConvexMetricSpace S>
Verdict<point_t<S>> verify_strict_wconvex(const S& space, const WFn<S>& f, std::size_t n, std::uint64_t seed,
                                          double separation,
                                          const OptionalSet<S>& domain = std::nullopt,
                                          const RunOptions& opts = {}) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "verify_strict_wconvex");
  if (!(separation > 0.0)) throw domain_error("verify_strict_wconvex: separation must be > 0");
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const auto x = detail::draw_point(space, domain, rng);
    const auto y = detail::draw_point(space, domain, rng);
    if (!x || !y || space.distance(*x, *y) < separation) return ProbeOutcome::skip();
    const double t = draw_t_in(rng, i, 0.05, 0.95);
    const ExtendedReal fx = f.evaluate(*x);
    const ExtendedReal fy = f.evaluate(*y);
    if (!fx.is_finite() || !fy.is_finite()) return ProbeOutcome::skip();
    const P z = combine(space, *x, *y, t);
    const double lhs = f.evaluate(z).value();
    const double rhs = (1.0 - t) * fx.value() + t * fy.value();
    if (w) {
      w->point("x", *x).point("y", *y).point("z", z);
      w->param("t", t).param("lhs", lhs).param("rhs", rhs).param("margin", opts.tol.strict);
    }
    return ProbeOutcome::score(relative_excess(lhs, rhs) + opts.tol.strict);
  };
  return run_probes<P>("strict_wconvex", n, seed, 0.0, probe, opts);
}

// ---------------------------------------------------------------------------
// Segments and dyadic grids

class DyadicGrid {
 public:
  static constexpr int kMaxLevel = 12;

  explicit DyadicGrid(int level) : level_(level) {
    if (level < 0) throw domain_error("dyadic grid level must be >= 0");
    if (level > kMaxLevel) {
      throw resource_error("dyadic grid level " + std::to_string(level) + " exceeds " +
                           std::to_string(kMaxLevel));
    }
  }

  int level() const { return level_; }
  std::size_t size() const { return (std::size_t{1} << level_) + 1; }

  std::vector<double> values() const {
    const std::size_t m = std::size_t{1} << level_;
    std::vector<double> out(m + 1);
    for (std::size_t k = 0; k <= m; ++k) out[k] = std::ldexp(static_cast<double>(k), -level_);
    return out;
  }

  /// Level at which m / 2^level first appears.
  static int first_level(std::size_t m, int level) {
    if (m == 0) return 0;
    int l = level;
    while (m % 2 == 0) {
      m /= 2;
      --l;
    }
    return l;
  }

 private:
  int level_;
};

template <ConvexMetricSpace S>
std::vector<point_t<S>> segment_points(const S& space, const point_t<S>& x, const point_t<S>& y,
                                       const std::vector<double>& lambdas) {
  const Segment<S> seg(space, x, y);
  std::vector<point_t<S>> out;
  out.reserve(lambdas.size());
  for (const double l : lambdas) out.push_back(seg.at(l));
  return out;
}

template <ConvexMetricSpace S>
std::vector<point_t<S>> segment_points(const S& space, const point_t<S>& x, const point_t<S>& y,
                                       const DyadicGrid& grid) {
  return segment_points(space, x, y, grid.values());
}

/// `count` equally spaced points, endpoints included.
template <ConvexMetricSpace S>
std::vector<point_t<S>> segment_points(const S& space, const point_t<S>& x, const point_t<S>& y,
                                       std::size_t count) {
  if (count < 2) throw domain_error("segment_points: need at least 2 points");
  std::vector<double> lambdas(count);
  for (std::size_t k = 0; k < count; ++k) lambdas[k] = static_cast<double>(k) / (count - 1);
  lambdas.back() = 1.0;
  return segment_points(space, x, y, lambdas);
}

// ---------------------------------------------------------------------------
// Lipschitz bounds

template <class P>
struct LipschitzReport {
  double constant = 0.0;
  std::size_t pairs_checked = 0;
  /// max |f(z) - f(w)| / d(z, w) over checked pairs.
  double max_ratio = 0.0;
  /// max of |f(z) - f(w)| - constant d(z, w), relative to 1 + constant d(z, w).
  double max_excess = -std::numeric_limits<double>::infinity();
  std::optional<std::pair<P, P>> witness;
  bool passed = false;
  /// Second assertion: with |f(x) - f(y)| <= alpha d(x, y) given, every
  /// pair obeys alpha. Empty when no alpha was supplied.
  std::optional<bool> alpha_passed;
  /// The bound |f| <= M failed on the ball; no Lipschitz check was made.
  bool precondition_failed = false;
  std::string note;
};

namespace detail {

template <class P>
struct PairScan {
  std::size_t pairs = 0;
  double max_ratio = 0.0;
  double max_excess = -std::numeric_limits<double>::infinity();
  std::optional<std::pair<P, P>> witness;

  template <ConvexMetricSpace S>
  void visit(const S& space, const WFn<S>& f, const P& z, const P& w, double constant) {
    const double d = space.distance(z, w);
    if (!(d > kDefaultTolerances.degenerate)) return;
    const double df = std::abs(f(z) - f(w));
    ++pairs;
    max_ratio = std::max(max_ratio, df / d);
    const double excess = (df - constant * d) / (1.0 + constant * d);
    if (excess > max_excess) {
      max_excess = excess;
      witness = std::make_pair(z, w);
    }
  }
};

}  // namespace detail

/// On L(x, y) sampled at `n` points: |f(z) - f(w)| <= c d(z, w) for every
/// pair, with c = |f(x) - f(y)| / d(x, y).
template <ConvexMetricSpace S>
LipschitzReport<point_t<S>> segment_lipschitz_check(const S& space, const WFn<S>& f, const point_t<S>& x,
                                                    const point_t<S>& y, std::size_t n,
                                                    std::optional<double> alpha = std::nullopt,
                                                    const Tolerances& tol = kDefaultTolerances) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "segment_lipschitz_check");
  const std::vector<P> pts = segment_points(space, x, y, std::max<std::size_t>(n, 2));
  const double dxy = space.distance(x, y);
  LipschitzReport<P> rep;
  rep.constant = std::abs(f(x) - f(y)) / dxy;
  detail::PairScan<P> scan;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) scan.visit(space, f, pts[i], pts[j], rep.constant);
  }
  rep.pairs_checked = scan.pairs;
  rep.max_ratio = scan.max_ratio;
  rep.max_excess = scan.max_excess;
  rep.passed = scan.max_excess <= tol.eq;
  if (!rep.passed) rep.witness = scan.witness;
  if (alpha) {
    if (rep.constant > *alpha * (1.0 + tol.eq)) {
      rep.note = "alpha bound does not hold at the endpoints";
    } else {
      detail::PairScan<P> again;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) again.visit(space, f, pts[i], pts[j], *alpha);
      }
      rep.alpha_passed = again.max_excess <= tol.eq;
    }
  }
  return rep;
}

/// |f| <= M on B(x0, r) implies |f(u) - f(v)| <= (2M / rho) d(u, v) on
/// B(x0, r - rho). Needs the extension property: the argument extends the
/// segment from v through u by rho, staying inside B(x0, r).
template <ConvexMetricSpace S>
LipschitzReport<point_t<S>> local_lipschitz_from_bound(const S& space, const WFn<S>& f, const point_t<S>& x0,
                                                       double r, double rho, double bound, std::size_t n,
                                                       std::uint64_t seed,
                                                       const Tolerances& tol = kDefaultTolerances) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "local_lipschitz_from_bound");
  if (!(rho > 0.0 && rho < r)) throw domain_error("local_lipschitz_from_bound: need 0 < rho < r");
  if (!supports_extend(space)) {
    throw unsupported_error("local_lipschitz_from_bound: " + space.describe() + " has no extension property");
  }
  LipschitzReport<P> rep;
  rep.constant = 2.0 * bound / rho;

  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = sample_rng(seed, i);
    const P z = detail::sample_in_ball(space, x0, r, rng);
    if (std::abs(f(z)) > bound * (1.0 + tol.eq)) {
      rep.precondition_failed = true;
      rep.note = "|f| <= M fails on B(x0, r)";
      rep.witness = std::make_pair(z, z);
      return rep;
    }
  }

  detail::PairScan<P> scan;
  std::size_t extension_failures = 0;
  const std::uint64_t pair_seed = splitmix64(seed ^ 0x1a2b3c4dULL);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = sample_rng(pair_seed, i);
    const P u = detail::sample_in_ball(space, x0, r - rho, rng);
    const P v = detail::sample_in_ball(space, x0, r - rho, rng);
    scan.visit(space, f, u, v, rep.constant);
    const double d = space.distance(u, v);
    if (d > tol.degenerate) {
      const auto xi = extend(space, v, u, d / (rho + d));
      if (!xi || std::abs(space.distance(*xi, u) - rho) > tol.eq * (1.0 + rho) ||
          space.distance(*xi, x0) > r * (1.0 + tol.eq)) {
        ++extension_failures;
      }
    }
  }
  rep.pairs_checked = scan.pairs;
  rep.max_ratio = scan.max_ratio;
  rep.max_excess = scan.max_excess;
  rep.passed = scan.max_excess <= tol.eq && extension_failures == 0;
  if (!rep.passed) rep.witness = scan.witness;
  if (extension_failures > 0) {
    rep.note = std::to_string(extension_failures) + " extension points left B(x0, r) or missed distance rho";
  }
  return rep;
}

/// f <= c on B(x0, r) implies |f| <= c + 2 |f(x0)| there.
template <ConvexMetricSpace S>
Verdict<point_t<S>> bound_above_check(const S& space, const WFn<S>& f, const point_t<S>& x0, double r,
                                      double c, std::size_t n, std::uint64_t seed, const RunOptions& opts = {}) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "bound_above_check");
  if (!(r > 0.0)) throw domain_error("bound_above_check: radius must be > 0");
  const double f0 = f(x0);
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const P z = detail::sample_in_ball(space, x0, r, rng);
    const double fz = f(z);
    if (fz > c * (1.0 + opts.tol.eq) + opts.tol.eq) return ProbeOutcome::skip();
    const double limit = c + 2.0 * std::abs(f0);
    if (w) w->point("x", z).param("f", fz).param("limit", limit);
    return ProbeOutcome::score(relative_excess(std::abs(fz), limit));
  };
  RunOptions o = opts;
  o.min_checked = std::max<std::size_t>(o.min_checked, n);
  auto v = run_probes<P>("bound_above", n, seed, opts.tol.eq, probe, o);
  if (v.inconclusive()) v.note = "f <= c does not hold on every sample of the ball";
  return v;
}

// ---------------------------------------------------------------------------
// Midpoint and dyadic convexity

/// f(W(x, y; (mu + nu) / 2)) <= f(W(x, y; mu)) / 2 + f(W(x, y; nu)) / 2.
template <ConvexMetricSpace S>
Verdict<point_t<S>> midpoint_convexity_check(const S& space, const WFn<S>& f, std::size_t n, std::uint64_t seed,
                                             const RunOptions& opts = {}) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "midpoint_convexity_check");
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const P x = space.sample(rng);
    const P y = space.sample(rng);
    const double mu = draw_t(rng, i);
    const double nu = uniform(rng);
    const double a = f.evaluate(combine(space, x, y, mu)).value();
    const double b = f.evaluate(combine(space, x, y, nu)).value();
    if (!std::isfinite(a) || !std::isfinite(b)) return ProbeOutcome::skip();
    const double lhs = f.evaluate(combine(space, x, y, 0.5 * (mu + nu))).value();
    const double rhs = 0.5 * a + 0.5 * b;
    if (w) {
      w->point("x", x).point("y", y);
      w->param("mu", mu).param("nu", nu).param("lhs", lhs).param("rhs", rhs);
    }
    return ProbeOutcome::score(relative_excess(lhs, rhs));
  };
  return run_probes<P>("midpoint_convexity", n, seed, opts.tol.eq, probe, opts);
}

/// f(W(x, y; l)) <= (1 - l) f(x) + l f(y) for every l in the dyadic grid of
/// the given level. On failure the witness carries the first level at which
/// a violating parameter appears.
template <ConvexMetricSpace S>
Verdict<point_t<S>> dyadic_convexity_check(const S& space, const WFn<S>& f, const point_t<S>& x,
                                           const point_t<S>& y, int levels, const Tolerances& tol = kDefaultTolerances) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "dyadic_convexity_check");
  const DyadicGrid grid(levels);
  const std::vector<double> lambdas = grid.values();
  const double fx = f(x);
  const double fy = f(y);

  Verdict<P> v;
  v.property = "dyadic_convexity";
  v.tolerance = tol.eq;
  int first_level = levels + 1;
  std::size_t worst_k = 0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double l = lambdas[k];
    const double lhs = f.evaluate(combine(space, x, y, l)).value();
    const double score = relative_excess(lhs, (1.0 - l) * fx + l * fy);
    ++v.samples_checked;
    if (score > v.worst_violation) {
      v.worst_violation = score;
      worst_k = k;
    }
    if (score > tol.eq) first_level = std::min(first_level, DyadicGrid::first_level(k, levels));
  }
  if (first_level > levels) {
    v.status = Status::passed;
    return v;
  }
  v.status = Status::failed;
  Witness<P> w;
  w.sample_index = worst_k;
  w.violation = v.worst_violation;
  const double l = lambdas[worst_k];
  w.point("x", x).point("y", y).point("z", combine(space, x, y, l));
  w.param("lambda", l).param("first_level", first_level);
  w.param("lhs", f.evaluate(combine(space, x, y, l)).value()).param("rhs", (1.0 - l) * fx + l * fy);
  v.witness = std::move(w);
  v.note = "first failing level " + std::to_string(first_level);
  return v;
}

// ---------------------------------------------------------------------------
// Epigraph and sublevel sets

/// Membership of W-combinations of epigraph points (x, f(x) + s) in the
/// epigraph, computed in X x R with the sum metric. x, y and t are drawn
/// exactly as verify_wconvex draws them for the same seed; each height
/// offset s is zero with probability 1/2.
template <ConvexMetricSpace S>
Verdict<point_t<S>> epigraph_convexity_check(const S& space, const WFn<S>& f, std::size_t n, std::uint64_t seed,
                                             const OptionalSet<S>& domain = std::nullopt,
                                             const RunOptions& opts = {}) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "epigraph_convexity_check");
  const ProductSpace<S, EuclideanSpace> epi_space(space, real_line(), ProductMetric::d1);
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const auto x = detail::draw_point(space, domain, rng);
    const auto y = detail::draw_point(space, domain, rng);
    if (!x || !y) return ProbeOutcome::skip();
    const double t = draw_t(rng, i);
    const ExtendedReal fx = f.evaluate(*x);
    const ExtendedReal fy = f.evaluate(*y);
    if (!fx.is_finite() || !fy.is_finite()) return ProbeOutcome::skip();
    auto offset = [&rng] { return uniform(rng) < 0.5 ? 0.0 : uniform(rng, 0.0, 2.0); };
    const double sx = offset();
    const double sy = offset();
    const std::pair<P, RealVector> a{*x, RealVector{fx.value() + sx}};
    const std::pair<P, RealVector> b{*y, RealVector{fy.value() + sy}};
    const auto c = combine(epi_space, a, b, t);
    const double fz = f.evaluate(c.first).value();
    const double height = c.second[0];
    if (w) {
      w->point("x", *x).point("y", *y).point("z", c.first);
      w->param("t", t).param("s_x", sx).param("s_y", sy).param("f_z", fz).param("height", height);
    }
    return ProbeOutcome::score(relative_excess(fz, height));
  };
  return run_probes<P>("epigraph_convexity", n, seed, opts.tol.eq, probe, opts);
}

/// f(W(x, y; t)) <= h for x, y in the sublevel set S_h(f), drawn by
/// rejection from the space. Inconclusive when no members are found.
template <ConvexMetricSpace S>
Verdict<point_t<S>> sublevel_convexity_check(const S& space, const WFn<S>& f, double h, std::size_t n,
                                             std::uint64_t seed, std::size_t budget = 2000,
                                             const RunOptions& opts = {}) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "sublevel_convexity_check");
  const ConvexSet<S> level = sublevel_set(f, h, budget);
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const auto x = level.sample(rng);
    if (!x) return ProbeOutcome::skip();
    const auto y = level.sample(rng);
    if (!y) return ProbeOutcome::skip();
    const double t = draw_t(rng, i);
    const P z = combine(space, *x, *y, t);
    const double fz = f.evaluate(z).value();
    if (w) w->point("x", *x).point("y", *y).point("z", z).param("t", t).param("f_z", fz).param("h", h);
    return ProbeOutcome::score(relative_excess(fz, h));
  };
  auto v = run_probes<P>("sublevel_convexity", n, seed, opts.tol.eq, probe, opts);
  if (v.inconclusive()) v.note = "sublevel set at height " + std::to_string(h) + " looks empty";
  return v;
}

/// Sampled closure of a set under W.
template <ConvexMetricSpace S>
Verdict<point_t<S>> set_convexity_check(const S& space, const ConvexSet<S>& c, std::size_t n, std::uint64_t seed,
                                        const RunOptions& opts = {}) {
  using P = point_t<S>;
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const auto x = c.sample(rng);
    const auto y = c.sample(rng);
    if (!x || !y) return ProbeOutcome::skip();
    const double t = draw_t(rng, i);
    const P z = combine(space, *x, *y, t);
    const bool inside = c.contains(z);
    if (w) w->point("x", *x).point("y", *y).point("z", z).param("t", t);
    return ProbeOutcome::score(inside ? 0.0 : 1.0);
  };
  return run_probes<P>("set_convexity", n, seed, 0.0, probe, opts);
}

// ---------------------------------------------------------------------------
// Strict convexity of the space

/// For sampled x0, rho and distinct x, y on S(x0, rho):
/// d(W(x, y; t), x0) <= rho (1 - strict) for t in [0.05, 0.95]. Sphere
/// points are built exactly from segment and extension points; pairs with
/// d(x, y) < min_separation * rho are skipped.
template <ConvexMetricSpace S>
Verdict<point_t<S>> strict_space_check(const S& space, std::size_t n, std::uint64_t seed,
                                       double min_separation = 1e-2, const RunOptions& opts = {}) {
  using P = point_t<S>;
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const P x0 = space.sample(rng);
    const P zx = space.sample(rng);
    const P zy = space.sample(rng);
    const double rho = uniform(rng, 0.1, 1.0) * std::max(space.distance(x0, zx), space.distance(x0, zy));
    const double t = draw_t_in(rng, i, 0.05, 0.95);
    if (!(rho > 0.0)) return ProbeOutcome::skip();
    const auto x = detail::sphere_point(space, x0, zx, rho);
    const auto y = detail::sphere_point(space, x0, zy, rho);
    if (!x || !y || space.distance(*x, *y) < min_separation * rho) return ProbeOutcome::skip();
    const double dm = space.distance(combine(space, *x, *y, t), x0);
    if (w) w->point("x0", x0).point("x", *x).point("y", *y).param("rho", rho).param("t", t).param("d_mid", dm);
    return ProbeOutcome::score(dm / rho - 1.0 + opts.tol.strict);
  };
  auto v = run_probes<P>("strict_space", n, seed, 0.0, probe, opts);
  if (v.inconclusive()) v.note = "could not construct sphere pairs";
  return v;
}

/// The strict-space inequality at one explicit configuration.
template <ConvexMetricSpace S>
Verdict<point_t<S>> strict_space_probe(const S& space, const point_t<S>& x0, const point_t<S>& x,
                                       const point_t<S>& y, double t, const Tolerances& tol = kDefaultTolerances) {
  using P = point_t<S>;
  const double rho = space.distance(x0, x);
  if (!(rho > 0.0)) throw domain_error("strict_space_probe: x must differ from x0");
  if (std::abs(space.distance(x0, y) - rho) > 1e-6 * rho) {
    throw domain_error("strict_space_probe: x and y are not on a common sphere around x0");
  }
  if (!(t > 0.0 && t < 1.0)) throw domain_error("strict_space_probe: t must lie in (0, 1)");
  auto probe = [&](std::uint64_t, Witness<P>* w) {
    if (space.distance(x, y) <= tol.degenerate) return ProbeOutcome::skip();
    const double dm = space.distance(combine(space, x, y, t), x0);
    if (w) w->point("x0", x0).point("x", x).point("y", y).param("rho", rho).param("t", t).param("d_mid", dm);
    return ProbeOutcome::score(dm / rho - 1.0 + tol.strict);
  };
  RunOptions o;
  o.workers = 1;
  o.tol = tol;
  return run_probes<P>("strict_space", 1, 0, 0.0, probe, o);
}

/// (Strict) W-convexity of f restricted to pairs on the sphere S(x0, sigma),
/// 0 < sigma < rho. With f = d(., x0) a strict pass for every center and
/// radius certifies strict convexity of the space.
template <ConvexMetricSpace S>
Verdict<point_t<S>> sphere_wconvex_check(const S& space, const WFn<S>& f, const point_t<S>& x0, double rho,
                                         double sigma, std::size_t n, std::uint64_t seed, bool strict = true,
                                         double min_separation = 1e-2, const RunOptions& opts = {}) {
  using P = point_t<S>;
  detail::require_function_space(space, f, "sphere_wconvex_check");
  if (!(sigma > 0.0 && sigma < rho)) throw domain_error("sphere_wconvex_check: need 0 < sigma < rho");
  const double margin = strict ? opts.tol.strict : 0.0;
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const auto x = detail::sphere_point(space, x0, space.sample(rng), sigma);
    const auto y = detail::sphere_point(space, x0, space.sample(rng), sigma);
    if (!x || !y || space.distance(*x, *y) < min_separation * sigma) return ProbeOutcome::skip();
    const double t = strict ? draw_t_in(rng, i, 0.05, 0.95) : draw_t(rng, i);
    const double lhs = f(combine(space, *x, *y, t));
    const double rhs = (1.0 - t) * f(*x) + t * f(*y);
    if (w) w->point("x", *x).point("y", *y).param("t", t).param("lhs", lhs).param("rhs", rhs);
    return ProbeOutcome::score(relative_excess(lhs, rhs) + margin);
  };
  auto v = run_probes<P>(strict ? "sphere_strict_wconvex" : "sphere_wconvex", n, seed, strict ? 0.0 : opts.tol.eq,
                         probe, opts);
  if (v.inconclusive()) v.note = "could not construct pairs on the sphere";
  return v;
}

/// d(W(x, y; l), W(y, x; 1 - l)) <= ((1 - l)^2 + l^2) d(x, y).
template <ConvexMetricSpace S>
Verdict<point_t<S>> w_symmetry_check(const S& space, std::size_t n, std::uint64_t seed, const RunOptions& opts = {}) {
  using P = point_t<S>;
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const P x = space.sample(rng);
    const P y = space.sample(rng);
    const double l = draw_t(rng, i);
    const double lhs = space.distance(combine(space, x, y, l), combine(space, y, x, 1.0 - l));
    const double rhs = ((1.0 - l) * (1.0 - l) + l * l) * space.distance(x, y);
    if (w) w->point("x", x).point("y", y).param("lambda", l).param("lhs", lhs).param("rhs", rhs);
    return ProbeOutcome::score(relative_excess(lhs, rhs));
  };
  return run_probes<P>("w_symmetry", n, seed, opts.tol.eq, probe, opts);
}

}  // namespace wconvex
