#pragma once

// Maps on convex metric spaces and W-based fixed-point iteration
//     x_{n+1} = W(x_n, T x_n; t_n),
// together with the residual function f(x) = d(x, T x) and a minimization
// route to fixed points.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wconvex/core.hpp"
#include "wconvex/functions.hpp"
#include "wconvex/minimize.hpp"
#include "wconvex/spaces/euclidean.hpp"
#include "wconvex/verdict.hpp"
#include "wconvex/verify.hpp"

namespace wconvex {

template <ConvexMetricSpace S>
class MapUnderTest {
 public:
  using point_type = point_t<S>;
  using Apply = std::function<point_type(const point_type&)>;

  MapUnderTest(S space, std::string label, Apply apply)
      : space_(std::move(space)), label_(std::move(label)), apply_(std::move(apply)) {}

  point_type operator()(const point_type& x) const { return apply_(x); }
  const S& space() const { return space_; }
  const std::string& label() const { return label_; }

 private:
  S space_;
  std::string label_;
  Apply apply_;
};

template <ConvexMetricSpace S>
MapUnderTest<S> identity_map(const S& space) {
  return MapUnderTest<S>(space, "identity", [](const point_t<S>& x) { return x; });
}

/// x -> W(p, x; k), k in [0, 1): pulls every point towards p.
template <ConvexMetricSpace S>
MapUnderTest<S> contraction_map(const S& space, point_t<S> p, double k) {
  if (!(k >= 0.0 && k < 1.0)) throw domain_error("contraction factor must lie in [0, 1)");
  return MapUnderTest<S>(space, "contraction(k=" + std::to_string(k) + ")",
                         [space, p, k](const point_t<S>& x) { return combine(space, p, x, k); });
}

/// Point reflection through p: the xi with W(x, xi; 1/2) = p.
template <ConvexMetricSpace S>
MapUnderTest<S> reflection_map(const S& space, point_t<S> p) {
  if (!supports_extend(space)) throw unsupported_error("reflection needs the extension property");
  return MapUnderTest<S>(space, "reflection", [space, p](const point_t<S>& x) {
    auto xi = extend(space, x, p, 0.5);
    if (!xi) throw domain_error("reflection: no extension point exists");
    return *xi;
  });
}

/// Rotation of the plane by `angle` about `center`.
inline MapUnderTest<EuclideanSpace> rotation_map(const EuclideanSpace& space, double angle,
                                                 RealVector center = {0.0, 0.0}) {
  if (space.dim() != 2) throw type_error("rotation needs a 2-dimensional space");
  if (center.size() != 2) throw type_error("rotation center must have 2 coordinates");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return MapUnderTest<EuclideanSpace>(space, "rotation(" + std::to_string(angle) + ")",
                                      [c, s, center](const RealVector& x) {
                                        const double u = x[0] - center[0];
                                        const double v = x[1] - center[1];
                                        return RealVector{center[0] + c * u - s * v, center[1] + s * u + c * v};
                                      });
}

/// x -> A x + b with A given row by row.
inline MapUnderTest<EuclideanSpace> affine_map(const EuclideanSpace& space, std::vector<RealVector> a,
                                               RealVector b) {
  const std::size_t n = space.dim();
  if (a.size() != n || b.size() != n) throw type_error("affine map dimensions do not match the space");
  for (const auto& row : a) {
    if (row.size() != n) throw type_error("affine map matrix must be square");
  }
  return MapUnderTest<EuclideanSpace>(space, "affine", [a = std::move(a), b = std::move(b)](const RealVector& x) {
    vec::require_same_size(b, x);
    RealVector out = b;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
    }
    return out;
  });
}

// ---------------------------------------------------------------------------
// Mann iteration

class MannSchedule {
 public:
  /// t_n = value for every n.
  static MannSchedule constant(double value = 0.5) {
    if (!(value > 0.0 && value < 1.0)) {
      throw domain_error("Mann schedule values must lie in (0, 1), got " + std::to_string(value));
    }
    return MannSchedule(value, false);
  }
  /// t_n = 1 / (n + 2).
  static MannSchedule harmonic() { return MannSchedule(0.0, true); }

  /// "constant", "constant:<t>" or "harmonic".
  static MannSchedule parse(const std::string& tag) {
    if (tag == "constant") return constant();
    if (tag == "harmonic") return harmonic();
    if (tag.rfind("constant:", 0) == 0) {
      try {
        return constant(std::stod(tag.substr(9)));
      } catch (const std::invalid_argument&) {
        throw domain_error("malformed schedule '" + tag + "'");
      }
    }
    throw domain_error("unknown schedule '" + tag + "' (valid: constant, constant:<t>, harmonic)");
  }

  double at(std::size_t n) const { return harmonic_ ? 1.0 / (static_cast<double>(n) + 2.0) : value_; }
  std::string describe() const { return harmonic_ ? "harmonic" : "constant:" + std::to_string(value_); }

 private:
  MannSchedule(double value, bool harmonic) : value_(value), harmonic_(harmonic) {}
  double value_;
  bool harmonic_;
};

template <class P>
struct FixedPointResult {
  P point{};
  double residual = 0.0;
  std::size_t iterations = 0;
  /// Residual d(x_n, T x_n) for n = 0, 1, ..., iterations.
  std::vector<double> trace;
  bool converged = false;
  /// The residual exceeded 1e6 times its initial value.
  bool diverged = false;
};

template <ConvexMetricSpace S>
FixedPointResult<point_t<S>> mann_iterate(const S& space, const MapUnderTest<S>& map, point_t<S> x0,
                                          const MannSchedule& schedule = MannSchedule::constant(),
                                          double fp_tol = 1e-8, std::size_t max_iter = 100000) {
  if (!(fp_tol >= 0.0)) throw domain_error("mann_iterate: fp_tol must be >= 0");
  FixedPointResult<point_t<S>> res;
  res.point = std::move(x0);
  point_t<S> tx = map(res.point);
  res.residual = space.distance(res.point, tx);
  res.trace.push_back(res.residual);
  const double initial = res.residual;
  while (res.residual > fp_tol && res.iterations < max_iter) {
    res.point = combine(space, res.point, tx, schedule.at(res.iterations));
    ++res.iterations;
    tx = map(res.point);
    res.residual = space.distance(res.point, tx);
    res.trace.push_back(res.residual);
    if (!std::isfinite(res.residual) || res.residual > 1e6 * std::max(initial, 1e-300)) {
      res.diverged = true;
      break;
    }
  }
  res.converged = res.residual <= fp_tol;
  return res;
}

/// CSV with header "iteration,residual".
inline void write_trace_csv(std::ostream& out, const std::vector<double>& trace,
                            const std::string& value_name = "residual") {
  out << "iteration," << value_name << "\n";
  out.precision(17);
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << "," << trace[i] << "\n";
}

// ---------------------------------------------------------------------------
// Residual function and nonexpansiveness

/// x -> d(x, T x)^exponent.
template <ConvexMetricSpace S>
WFn<S> residual_function(const S& space, const MapUnderTest<S>& map, double exponent = 1.0) {
  if (!(exponent >= 1.0)) throw domain_error("residual exponent must be >= 1");
  const std::string label = exponent == 1.0 ? "d(.,T.)" : "d(.,T.)^" + std::to_string(exponent);
  return WFn<S>(space, label, [space, map, exponent](const point_t<S>& x) {
    const double d = space.distance(x, map(x));
    return ExtendedReal(exponent == 1.0 ? d : std::pow(d, exponent));
  });
}

/// d(T x, T y) <= d(x, y) on sampled pairs.
template <ConvexMetricSpace S>
Verdict<point_t<S>> check_nonexpansive(const S& space, const MapUnderTest<S>& map, std::size_t n,
                                       std::uint64_t seed,
                                       const OptionalSet<S>& domain = std::nullopt,
                                       const RunOptions& opts = {}) {
  using P = point_t<S>;
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const auto x = detail::draw_point(space, domain, rng);
    const auto y = detail::draw_point(space, domain, rng);
    if (!x || !y) return ProbeOutcome::skip();
    const double lhs = space.distance(map(*x), map(*y));
    const double rhs = space.distance(*x, *y);
    if (w) w->point("x", *x).point("y", *y).param("d_Tx_Ty", lhs).param("d_x_y", rhs);
    return ProbeOutcome::score(relative_excess(lhs, rhs));
  };
  return run_probes<P>("nonexpansive", n, seed, opts.tol.eq, probe, opts);
}

// ---------------------------------------------------------------------------
// Fixed points as residual minimizers

struct ResidualOracleConfig {
  /// Exponent applied to d(x, T x) before certification and minimization.
  /// The plain residual is rarely strictly W-convex; its square often is.
  double exponent = 2.0;
  std::size_t strict_samples = 1000;
  double separation = 0.1;
  std::uint64_t seed = 0x56;
  double fp_tol = 1e-6;
  MinimizeConfig minimize{};
};

template <class P>
struct ResidualOracleReport {
  Verdict<P> strict;
  bool certified = false;
  std::optional<P> minimizer;
  /// d(xi, T xi) at the minimizer (not raised to the exponent).
  double residual = std::numeric_limits<double>::infinity();
  bool minimized = false;
  bool fixed_point = false;
  /// Strictly W-convex residual, converged minimization, yet the minimizer
  /// is not a fixed point.
  bool inconsistent = false;
};

template <ConvexMetricSpace S>
ResidualOracleReport<point_t<S>> residual_minimizer_oracle(const S& space, const MapUnderTest<S>& map,
                                                           const ResidualOracleConfig& cfg = {},
                                                           const OptionalSet<S>& domain = std::nullopt,
                                                           const RunOptions& opts = {}) {
  ResidualOracleReport<point_t<S>> rep;
  const WFn<S> f = residual_function(space, map, cfg.exponent);
  rep.strict = verify_strict_wconvex(space, f, cfg.strict_samples, cfg.seed, cfg.separation, domain, opts);
  rep.certified = rep.strict.passed();
  const WFn<S> target = domain ? restrict(f, *domain) : f;
  const auto m = minimize(target, cfg.minimize, domain);
  rep.minimized = m.converged;
  if (m.best) {
    rep.minimizer = m.best;
    rep.residual = space.distance(*m.best, map(*m.best));
  }
  rep.fixed_point = rep.minimizer && rep.residual <= cfg.fp_tol;
  rep.inconsistent = rep.certified && rep.minimized && !rep.fixed_point;
  return rep;
}

/// Continuous self-map of a compact convex set: Mann iteration from x0 and
/// multistart residual minimization over the set, side by side.
template <class P>
struct CompactScenarioReport {
  Verdict<P> self_map;
  FixedPointResult<P> mann;
  std::optional<P> minimizer;
  double min_residual = std::numeric_limits<double>::infinity();
  bool fixed_point_found = false;
};

template <ConvexMetricSpace S>
CompactScenarioReport<point_t<S>> compact_fixed_point_scenario(const S& space, const MapUnderTest<S>& map,
                                                               const ConvexSet<S>& domain, point_t<S> x0,
                                                               double fp_tol = 1e-6, std::size_t max_iter = 100000,
                                                               const MinimizeConfig& mcfg = {},
                                                               std::size_t n = 1000, std::uint64_t seed = 0x55) {
  using P = point_t<S>;
  CompactScenarioReport<P> rep{};
  auto probe = [&](std::uint64_t i, Witness<P>* w) {
    Rng rng = sample_rng(seed, i);
    const auto x = domain.sample(rng);
    if (!x) return ProbeOutcome::skip();
    const P tx = map(*x);
    if (w) w->point("x", *x).point("Tx", tx);
    return ProbeOutcome::score(domain.contains(tx) ? 0.0 : 1.0);
  };
  rep.self_map = run_probes<P>("self_map", n, seed, 0.0, probe);
  rep.mann = mann_iterate(space, map, std::move(x0), MannSchedule::constant(), fp_tol, max_iter);
  const auto m = minimize(restrict(residual_function(space, map, 2.0), domain), mcfg, domain);
  if (m.best) {
    rep.minimizer = m.best;
    rep.min_residual = space.distance(*m.best, map(*m.best));
  }
  rep.fixed_point_found = rep.mann.converged || rep.min_residual <= fp_tol;
  return rep;
}

}  // namespace wconvex
