#pragma once

// Metric projection onto convex sets using nothing but the convex structure
// W and set membership.
//
// Each pass of segment descent draws a member y' (fresh from the set's
// sampler or from a pool of recent incumbents) and tries two moves:
//  - chord: minimize phi(t) = d(x, W(y*, y'; t)) over [0, 1], then push the
//    minimizer towards x along W(c, x; s) for the largest s keeping it in
//    the set (bisection on membership);
//  - pull-push: the same push applied along the whole chord, minimized over
//    the chord parameter.
// Every candidate stays in the set by convexity, and a push shrinks the
// distance by the factor (1 - s).

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "wconvex/core.hpp"
#include "wconvex/functions.hpp"
#include "wconvex/line_search.hpp"
#include "wconvex/sampling.hpp"

namespace wconvex {

struct ProjectionConfig {
  std::size_t starts = 4;
  /// Passes without an improvement above `tol` before a restart stops.
  std::size_t iters = 40;
  std::size_t max_passes = 20000;
  double tol = 1e-15;
  std::uint64_t seed = 0x5eed;
  std::size_t initial_samples = 8;
  /// Points within candidate_tol * (1 + best) of the best distance are kept
  /// as near-optimal candidates.
  double candidate_tol = 1e-13;
  std::size_t max_candidates = 256;
  /// Resolution of the pull-push line search.
  double pull_push_tol = 1e-6;
};

template <class P>
struct ProjectionResult {
  std::optional<P> best;
  double distance = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::vector<P> candidates;
  bool converged = false;
  /// The set's sampler returned nothing; the result is inconclusive.
  bool sampler_exhausted = false;
};

namespace detail {

template <ConvexMetricSpace S>
class CandidatePool {
 public:
  CandidatePool(const S& space, double rel_tol, std::size_t cap) : space_(space), rel_tol_(rel_tol), cap_(cap) {}

  void offer(const point_t<S>& p, double value, double best) {
    if (value > threshold(best)) return;
    if (items_.size() >= cap_) return;
    for (const auto& [q, v] : items_) {
      if (space_.distance(p, q) <= 1e-12) return;
    }
    items_.emplace_back(p, value);
  }

  void prune(double best) {
    const double thr = threshold(best);
    std::erase_if(items_, [thr](const auto& it) { return it.second > thr; });
  }

  std::vector<point_t<S>> points() const {
    std::vector<point_t<S>> out;
    out.reserve(items_.size());
    for (const auto& [p, v] : items_) out.push_back(p);
    return out;
  }

  void merge(const CandidatePool& other, double best) {
    for (const auto& [p, v] : other.items_) offer(p, v, best);
  }

 private:
  double threshold(double best) const { return best + rel_tol_ * (1.0 + best); }

  const S& space_;
  double rel_tol_;
  std::size_t cap_;
  std::vector<std::pair<point_t<S>, double>> items_;
};

/// Largest s in [0, 1] (up to bisection resolution) with W(c, x; s) in Y.
template <ConvexMetricSpace S>
double approach_fraction(const S& space, const ConvexSet<S>& y, const point_t<S>& c, const point_t<S>& x) {
  if (y.contains(x)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 52 && hi - lo > 1e-15; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (y.contains(combine(space, c, x, mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace detail

template <ConvexMetricSpace S>
ProjectionResult<point_t<S>> project(const S& space, const ConvexSet<S>& y, const point_t<S>& x,
                                     const ProjectionConfig& cfg = {}) {
  using P = point_t<S>;
  if (cfg.starts == 0) throw domain_error("project: starts must be >= 1");
  ProjectionResult<P> result;
  if (y.contains(x)) {
    result.best = x;
    result.distance = 0.0;
    result.candidates = {x};
    result.converged = true;
    return result;
  }

  detail::CandidatePool<S> pool(space, cfg.candidate_tol, cfg.max_candidates);
  std::vector<detail::CandidatePool<S>> restart_pools;
  bool all_converged = true;

  for (std::size_t r = 0; r < cfg.starts; ++r) {
    Rng rng = sample_rng(cfg.seed, r);
    std::optional<P> incumbent;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < std::max<std::size_t>(1, cfg.initial_samples); ++k) {
      auto s = y.sample(rng);
      if (!s) continue;
      const double v = space.distance(x, *s);
      if (v < best) {
        best = v;
        incumbent = std::move(*s);
      }
    }
    if (!incumbent) {
      result.sampler_exhausted = true;
      all_converged = false;
      continue;
    }

    detail::CandidatePool<S> local(space, cfg.candidate_tol, cfg.max_candidates);
    local.offer(*incumbent, best, best);
    std::deque<P> elite{*incumbent};
    std::size_t stale = 0;
    std::size_t pass = 0;
    for (; pass < cfg.max_passes && stale < cfg.iters; ++pass) {
      std::optional<P> other;
      if (elite.size() > 1 && uniform(rng) < 0.5) {
        other = elite[uniform_index(rng, elite.size())];
      } else {
        other = y.sample(rng);
        if (!other) {
          result.sampler_exhausted = true;
          break;
        }
      }
      const double other_value = space.distance(x, *other);
      local.offer(*other, other_value, best);

      const P& from = *incumbent;
      const LineMinimum lm = golden_section_on_segment(
          [&](double t) { return space.distance(x, combine(space, from, *other, t)); });
      const P chord_point = combine(space, from, *other, lm.t);
      const double s = detail::approach_fraction(space, y, chord_point, x);
      P moved = s > 0.0 ? combine(space, chord_point, x, s) : chord_point;
      // Rounding can leave an unpushed chord point just outside the set.
      double value = s > 0.0 || y.contains(moved) ? space.distance(x, moved) : std::numeric_limits<double>::infinity();
      if (value < std::numeric_limits<double>::infinity()) local.offer(moved, value, best);

      // Pull-push: slide from the incumbent towards the other member, then
      // push towards x. Where the slide crosses the inward normal ray of
      // the nearest point the push lands on that point.
      auto pull_push = [&](double e) {
        const P c = combine(space, from, *other, e);
        const double f = detail::approach_fraction(space, y, c, x);
        return f > 0.0 ? combine(space, c, x, f) : c;
      };
      if (!(value < best)) {
        const LineMinimum pp =
            golden_section([&](double e) { return space.distance(x, pull_push(e)); }, 0.0, 1.0, cfg.pull_push_tol);
        if (pp.value < value) {
          P pushed = pull_push(pp.t);
          if (y.contains(pushed)) {
            moved = std::move(pushed);
            value = space.distance(x, moved);
            local.offer(moved, value, best);
          }
        }
      }

      if (value < best) {
        const double gain = best - value;
        best = value;
        incumbent = moved;
        local.prune(best);
        elite.push_back(std::move(moved));
        if (elite.size() > 8) elite.pop_front();
        stale = gain > cfg.tol * (1.0 + best) ? 0 : stale + 1;
      } else {
        ++stale;
      }
    }
    result.iterations += pass;
    all_converged = all_converged && stale >= cfg.iters;

    if (best < result.distance) {
      result.distance = best;
      result.best = incumbent;
    }
    restart_pools.push_back(std::move(local));
  }

  if (result.best) {
    pool.offer(*result.best, result.distance, result.distance);
    for (const auto& rp : restart_pools) pool.merge(rp, result.distance);
    result.candidates = pool.points();
  }
  result.converged = all_converged && result.best.has_value();
  return result;
}

/// Largest pairwise distance in a point list.
template <ConvexMetricSpace S>
double diameter(const S& space, const std::vector<point_t<S>>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, space.distance(pts[i], pts[j]));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Chebyshev diagnostics

template <class P>
struct ChebyshevEntry {
  P query;
  std::optional<P> best;
  double distance = 0.0;
  double diameter = 0.0;
  std::size_t candidates = 0;
  bool unique = false;
  /// Strict convexity was certified yet the near-optimal set is not a
  /// singleton: contradicts uniqueness of projections in strictly convex
  /// spaces.
  bool inconsistent = false;
};

template <class P>
struct ChebyshevReport {
  std::vector<ChebyshevEntry<P>> entries;
  double max_diameter = 0.0;
  bool strict_certified = false;
  bool any_inconsistent = false;
};

struct ChebyshevConfig {
  ProjectionConfig projection{.starts = 16};
  double uniqueness_tol = 1e-6;
  bool strict_certified = false;
};

template <ConvexMetricSpace S>
ChebyshevReport<point_t<S>> chebyshev_diagnostic(const S& space, const ConvexSet<S>& y,
                                                 const std::vector<point_t<S>>& xs,
                                                 const ChebyshevConfig& cfg = {}) {
  if (xs.empty()) throw domain_error("chebyshev_diagnostic: no query points");
  ChebyshevReport<point_t<S>> report;
  report.strict_certified = cfg.strict_certified;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ProjectionConfig pc = cfg.projection;
    pc.seed = splitmix64(cfg.projection.seed + i);
    const auto res = project(space, y, xs[i], pc);
    ChebyshevEntry<point_t<S>> e{xs[i], std::nullopt};
    e.best = res.best;
    e.distance = res.distance;
    e.candidates = res.candidates.size();
    e.diameter = diameter(space, res.candidates);
    e.unique = e.diameter <= cfg.uniqueness_tol;
    e.inconsistent = cfg.strict_certified && !e.unique;
    report.max_diameter = std::max(report.max_diameter, e.diameter);
    report.any_inconsistent = report.any_inconsistent || e.inconsistent;
    report.entries.push_back(std::move(e));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Proximality

template <class P>
struct ProximalityReport {
  bool stabilized = false;
  std::vector<double> distances;
  std::optional<P> best;
  /// The set is an open surrogate and the best point sits within two band
  /// widths of its nominal boundary: the infimum is approached, not attained.
  bool at_open_boundary = false;
};

/// Runs project with budgets budget, 2 budget, 4 budget, ... and reports
/// whether successive best distances agree within `tol`.
template <ConvexMetricSpace S>
ProximalityReport<point_t<S>> proximality_probe(const S& space, const ConvexSet<S>& y, const point_t<S>& x,
                                                std::size_t budget, double tol = 1e-9,
                                                std::size_t rounds = 5) {
  if (budget == 0) throw domain_error("proximality_probe: budget must be >= 1");
  ProximalityReport<point_t<S>> rep;
  std::size_t b = budget;
  for (std::size_t k = 0; k < rounds; ++k, b *= 2) {
    ProjectionConfig cfg;
    cfg.starts = 2;
    cfg.iters = b;
    cfg.max_passes = 50 * b;
    const auto res = project(space, y, x, cfg);
    if (!res.best) break;
    rep.distances.push_back(res.distance);
    rep.best = res.best;
    const std::size_t m = rep.distances.size();
    if (res.distance == 0.0 ||
        (m >= 2 && std::abs(rep.distances[m - 1] - rep.distances[m - 2]) <= tol * (1.0 + res.distance))) {
      rep.stabilized = true;
      break;
    }
  }
  if (rep.best && y.open_band() > 0.0) {
    if (const auto depth = y.depth(*rep.best)) rep.at_open_boundary = *depth <= 2.0 * y.open_band();
  }
  return rep;
}

}  // namespace wconvex
