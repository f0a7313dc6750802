#pragma once

// Sampled checks of the hypotheses every space must satisfy: the metric
// axioms, the convex-structure inequality, and the segment identities
//     d(x, W(x, y; t)) = t d(x, y),   d(y, W(x, y; t)) = (1 - t) d(x, y).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "wconvex/core.hpp"
#include "wconvex/sampling.hpp"
#include "wconvex/verdict.hpp"

namespace wconvex {

template <ConvexMetricSpace S>
Verdict<point_t<S>> check_metric_axioms(const S& space, std::size_t n, std::uint64_t seed,
                                        const RunOptions& opts = {}) {
  using P = point_t<S>;
  const double eps = opts.tol.eq;
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const P a = space.sample(rng);
    const P b = space.sample(rng);
    const P c = space.sample(rng);
    const double dab = space.distance(a, b);
    const double dba = space.distance(b, a);
    const double dac = space.distance(a, c);
    const double dbc = space.distance(b, c);
    const double daa = space.distance(a, a);

    const double scores[] = {
        relative_excess(0.0, dab),                // nonnegativity: 0 <= d(a,b)
        relative_excess(daa, 0.0),                // identity: d(a,a) <= 0
        std::abs(dab - dba) / (1.0 + dab),        // symmetry
        relative_excess(dac, dab + dbc),          // triangle inequality
    };
    const char* names[] = {"nonnegativity", "identity", "symmetry", "triangle"};
    const auto worst = std::max_element(std::begin(scores), std::end(scores)) - std::begin(scores);
    if (w) {
      w->point("a", a).point("b", b).point("c", c);
      w->param("d_ab", dab).param("d_ba", dba).param("d_ac", dac).param("d_bc", dbc).param("d_aa", daa);
      w->detail = names[worst];
    }
    return ProbeOutcome::score(scores[worst]);
  };
  return run_probes<P>("metric_axioms", n, seed, eps, probe, opts);
}

/// d(u, W(x, y; t)) <= (1 - t) d(u, x) + t d(u, y).
template <ConvexMetricSpace S>
Verdict<point_t<S>> check_convex_structure(const S& space, std::size_t n, std::uint64_t seed,
                                           const RunOptions& opts = {}) {
  using P = point_t<S>;
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const P u = space.sample(rng);
    const P x = space.sample(rng);
    const P y = space.sample(rng);
    const double t = draw_t(rng, i);
    const double lhs = space.distance(u, combine(space, x, y, t));
    const double rhs = (1.0 - t) * space.distance(u, x) + t * space.distance(u, y);
    if (w) {
      w->point("u", u).point("x", x).point("y", y);
      w->param("t", t).param("lhs", lhs).param("rhs", rhs);
    }
    return ProbeOutcome::score(relative_excess(lhs, rhs));
  };
  return run_probes<P>("convex_structure", n, seed, opts.tol.eq, probe, opts);
}

/// Segment identities, plus additivity d(x, z) + d(z, y) = d(x, y) for
/// z = W(x, y; t). Pairs with d(x, y) below the degeneracy threshold are
/// skipped.
template <ConvexMetricSpace S>
Verdict<point_t<S>> check_segment_identities(const S& space, std::size_t n, std::uint64_t seed,
                                             const RunOptions& opts = {}) {
  using P = point_t<S>;
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const P x = space.sample(rng);
    const P y = space.sample(rng);
    const double t = draw_t(rng, i);
    const double dxy = space.distance(x, y);
    if (dxy < opts.tol.degenerate) return ProbeOutcome::skip();
    const P z = combine(space, x, y, t);
    const double dxz = space.distance(x, z);
    const double dzy = space.distance(z, y);
    const double scale = 1.0 + dxy;
    const double score = std::max({std::abs(dxz - t * dxy) / scale,
                                   std::abs(dzy - (1.0 - t) * dxy) / scale,
                                   std::abs(dxz + dzy - dxy) / scale});
    if (w) {
      w->point("x", x).point("y", y).point("z", z);
      w->param("t", t).param("d_xy", dxy).param("d_xz", dxz).param("d_zy", dzy);
    }
    return ProbeOutcome::score(score);
  };
  return run_probes<P>("segment_identities", n, seed, opts.tol.eq, probe, opts);
}

/// W(x, x; t) = x for every t.
template <ConvexMetricSpace S>
Verdict<point_t<S>> check_idempotence(const S& space, std::size_t n, std::uint64_t seed,
                                      const RunOptions& opts = {}) {
  using P = point_t<S>;
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const P x = space.sample(rng);
    const double t = draw_t(rng, i);
    const double d = space.distance(x, combine(space, x, x, t));
    if (w) w->point("x", x).param("t", t).param("d", d);
    return ProbeOutcome::score(d);
  };
  return run_probes<P>("combine_idempotence", n, seed, opts.tol.eq, probe, opts);
}

/// W(y, extend(y, x, lambda); lambda) = x. Inconclusive when the space has
/// no extension capability; samples where no extension point exists are
/// skipped.
template <ConvexMetricSpace S>
Verdict<point_t<S>> check_extension_roundtrip(const S& space, std::size_t n, std::uint64_t seed,
                                              const RunOptions& opts = {}) {
  using P = point_t<S>;
  if (!supports_extend(space)) {
    Verdict<P> v;
    v.property = "extension_roundtrip";
    v.seed = seed;
    v.tolerance = opts.tol.eq;
    v.note = "space does not support extension";
    return v;
  }
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const P x = space.sample(rng);
    const P y = space.sample(rng);
    const double lambda = uniform(rng, 0.05, 0.95);
    const auto xi = extend(space, y, x, lambda);
    if (!xi) return ProbeOutcome::skip();
    const double d = space.distance(combine(space, y, *xi, lambda), x);
    if (w) w->point("x", x).point("y", y).point("xi", *xi).param("lambda", lambda).param("d", d);
    return ProbeOutcome::score(d / (1.0 + space.distance(x, y)));
  };
  return run_probes<P>("extension_roundtrip", n, seed, opts.tol.eq, probe, opts);
}

}  // namespace wconvex
