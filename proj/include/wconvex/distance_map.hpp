#pragma once

// Distance to a convex set, d_Y(x) = inf { d(x, y) : y in Y }, backed by the
// projection solver. Values are distances to actual members of Y, so they
// never undershoot the infimum (beyond set-membership slack).

#include <cstddef>
#include <string>

#include "wconvex/functions.hpp"
#include "wconvex/projection.hpp"

namespace wconvex {

/// `budget` is the solver's patience: passes without improvement before a
/// restart stops.
template <ConvexMetricSpace S>
WFn<S> distance_map(const S& space, const ConvexSet<S>& y, std::size_t budget = 40,
                    std::size_t starts = 2, std::uint64_t seed = 0xd157) {
  if (budget == 0) throw domain_error("distance_map: budget must be >= 1");
  {
    Rng rng = sample_rng(seed, 0);
    if (!y.sample(rng)) throw domain_error("distance_map: set '" + y.label() + "' has no members");
  }
  ProjectionConfig cfg;
  cfg.iters = budget;
  cfg.starts = starts;
  cfg.seed = seed;
  cfg.max_candidates = 1;
  return WFn<S>(
      space, "d_Y(" + y.label() + ")",
      [space, y, cfg](const point_t<S>& x) {
        const auto res = project(space, y, x, cfg);
        if (!res.best) throw domain_error("distance_map: sampler exhausted on '" + y.label() + "'");
        return ExtendedReal(res.distance);
      },
      Convexity::convex);
}

}  // namespace wconvex
