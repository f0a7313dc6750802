#pragma once

// Multistart minimization of a function on a convex metric space by line
// searches along W-chords.
//
// From the current point x a member z is drawn, a = W(x, z; s) is placed at
// distance about r from x, and f is minimized along the chord. When the
// space can extend geodesics the chord runs from a through x to the
// reflected point extend(a, x, 1/2), so x sits at its middle; otherwise the
// chord is L(x, a). The trust radius r doubles when the chord minimum lands
// on an endpoint and otherwise follows twice the accepted step.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "wconvex/core.hpp"
#include "wconvex/functions.hpp"
#include "wconvex/line_search.hpp"
#include "wconvex/projection.hpp"
#include "wconvex/sampling.hpp"

namespace wconvex {

struct MinimizeConfig {
  std::size_t starts = 16;
  std::size_t max_iter = 5000;
  /// Chords without improvement above `tol` (relative) before a start stops.
  std::size_t patience = 60;
  double tol = 1e-15;
  double initial_radius = 1.0;
  std::uint64_t seed = 0x313;
  /// Start results within cluster_tol * (1 + |best|) of the best value form
  /// the reported minimizer cluster.
  double cluster_tol = 1e-9;
  std::size_t start_draws = 200;
};

template <class P>
struct MinimizeResult {
  std::optional<P> best;
  double value = std::numeric_limits<double>::infinity();
  std::vector<P> minimizers;
  std::vector<double> values;
  std::vector<std::size_t> cluster;
  double cluster_diameter = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

template <ConvexMetricSpace S>
double finite_or_inf(const WFn<S>& f, const point_t<S>& x) {
  return f.evaluate(x).value();
}

}  // namespace detail

template <ConvexMetricSpace S>
MinimizeResult<point_t<S>> minimize(const WFn<S>& f, const MinimizeConfig& cfg = {},
                                    const OptionalSet<S>& domain = std::nullopt) {
  using P = point_t<S>;
  if (cfg.starts == 0) throw domain_error("minimize: starts must be >= 1");
  const S& space = f.space();
  auto draw = [&](Rng& rng) -> std::optional<P> {
    if (domain) return domain->sample(rng);
    return space.sample(rng);
  };
  const bool can_extend = supports_extend(space);

  MinimizeResult<P> result;
  bool all_converged = true;
  for (std::size_t s = 0; s < cfg.starts; ++s) {
    Rng rng = sample_rng(cfg.seed, s);
    std::optional<P> x;
    double fx = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cfg.start_draws && !x; ++k) {
      auto z = draw(rng);
      if (!z) break;
      const double v = detail::finite_or_inf(f, *z);
      if (std::isfinite(v)) {
        x = std::move(z);
        fx = v;
      }
    }
    if (!x) {
      all_converged = false;
      continue;
    }

    double r = cfg.initial_radius;
    std::size_t stale = 0;
    std::size_t it = 0;
    for (; it < cfg.max_iter && stale < cfg.patience; ++it) {
      const auto z = draw(rng);
      if (!z) break;
      const double dz = space.distance(*x, *z);
      if (!(dz > 0.0)) {
        ++stale;
        continue;
      }
      const P a = combine(space, *x, *z, std::min(1.0, r / dz));
      std::optional<P> b;
      if (can_extend) b = extend(space, a, *x, 0.5);
      const P& from = b ? a : *x;
      const P& to = b ? *b : a;
      auto phi = [&](double t) { return detail::finite_or_inf(f, combine(space, from, to, t)); };
      const LineMinimum lm = golden_section_on_segment(phi);
      if (lm.value < fx) {
        P next = combine(space, from, to, lm.t);
        const double gain = fx - lm.value;
        const double step = space.distance(*x, next);
        const bool at_end = lm.t <= 1.0 / kLineGridPoints || lm.t >= 1.0 - 1.0 / kLineGridPoints;
        r = at_end ? 2.0 * r : std::max(2.0 * step, 1e-12);
        x = std::move(next);
        fx = lm.value;
        stale = gain > cfg.tol * (1.0 + std::abs(fx)) ? 0 : stale + 1;
      } else {
        ++stale;
      }
    }
    result.iterations += it;
    all_converged = all_converged && stale >= cfg.patience;
    result.minimizers.push_back(*x);
    result.values.push_back(fx);
    if (fx < result.value) {
      result.value = fx;
      result.best = *x;
    }
  }

  if (result.best) {
    std::vector<P> near;
    for (std::size_t i = 0; i < result.values.size(); ++i) {
      if (result.values[i] <= result.value + cfg.cluster_tol * (1.0 + std::abs(result.value))) {
        result.cluster.push_back(i);
        near.push_back(result.minimizers[i]);
      }
    }
    result.cluster_diameter = diameter(space, near);
  }
  result.converged = all_converged && result.best.has_value();
  return result;
}

}  // namespace wconvex
