// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "oracles.hpp"
#include "wconvex/fixed_point.hpp"
#include "wconvex/projection.hpp"
#include "wconvex/verify.hpp"

using namespace wconvex;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double dot(const RealVector& a, const RealVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

std::vector<AnySpace> axiom_spaces() {
  return {AnySpace(EuclideanSpace(3, Norm::l2)),   AnySpace(EuclideanSpace(3, Norm::l1)),
          AnySpace(EuclideanSpace(3, Norm::linf)), AnySpace(BallSpace(3)),
          AnySpace(IntervalSpace()),               catalog::product()};
}

/// Every axiom verdict of the first criterion, serialized in a fixed order.
std::vector<std::string> axiom_suite(std::size_t workers, double& worst, bool& all_passed) {
  RunOptions o;
  o.workers = workers;
  std::vector<std::string> out;
  worst = -std::numeric_limits<double>::infinity();
  all_passed = true;
  for (const auto& s : axiom_spaces()) {
    for (auto seed : kSeeds) {
      for (const auto& v : {check_metric_axioms(s, 10000, seed, o), check_convex_structure(s, 10000, seed, o),
                            check_segment_identities(s, 10000, seed, o)}) {
        worst = std::max(worst, v.worst_violation);
        all_passed = all_passed && v.passed();
        out.push_back(verdict_to_json(s, v).dump());
      }
    }
  }
  return out;
}

std::vector<std::string> g_axiom_reports;

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool passed = false;
  g_axiom_reports = axiom_suite(1, worst, passed);
  const double secs = seconds_since(t0);
  o.require(passed, "a check failed");
  o.require(worst <= 1e-9, "worst violation above 1e-9");
  o.require(secs <= 30.0, "over 30 s");
  o.detail << " verdicts=" << g_axiom_reports.size() << " worst=" << worst << " time=" << secs << "s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  int convex_passed = 0;
  int strict_passed = 0;
  int strict_total = 0;
  int planted_failed = 0;
  for (const auto& e : catalog::convex_entries()) {
    if (verify_wconvex(e.f.space(), e.f, 10000, 101).passed()) ++convex_passed;
    else o.require(false, e.name + " did not pass");
    if (!e.strict) continue;
    ++strict_total;
    if (verify_strict_wconvex(e.f.space(), e.f, 10000, 102, 0.1).passed()) ++strict_passed;
  }
  for (const auto& e : catalog::planted_entries()) {
    const auto v = verify_wconvex(e.f.space(), e.f, 10000, 103);
    if (v.failed() && v.witness && catalog::witness_replays(e.f, *v.witness)) ++planted_failed;
  }
  o.require(convex_passed >= 12, "fewer than 12 convex passes");
  o.require(strict_total == 4 && strict_passed == 4, "strict entries");
  o.require(planted_failed == 3, "planted entries");
  o.detail << " convex=" << convex_passed << " strict=" << strict_passed << "/" << strict_total
           << " planted_failed=" << planted_failed << "/3";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::size_t segments = 0;
  std::size_t failures = 0;
  for (const auto& s : axiom_spaces()) {
    Rng rng = sample_rng(301, segments);
    for (int k = 0; k < 50; ++k) {
      const AnyPoint x = s.sample(rng);
      const AnyPoint y = s.sample(rng);
      if (s.distance(x, y) < 1e-6) continue;
      const auto f = distance_to_point(s, x);
      ++segments;
      if (!segment_lipschitz_check(s, f, x, y, 33).passed) ++failures;
    }
  }
  o.require(failures == 0, "segment bound violated");

  // Tightness along rays from the segment start.
  EuclideanSpace e(3);
  Rng rng(302);
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (int k = 0; k < 50; ++k) {
    const RealVector x = e.sample(rng);
    const RealVector y = e.sample(rng);
    const auto r = segment_lipschitz_check(e, distance_to_point(e, x), x, y, 33);
    min_ratio = std::min(min_ratio, r.max_ratio / r.constant);
    max_ratio = std::max(max_ratio, r.max_ratio / r.constant);
  }
  o.require(min_ratio >= 1.0 - 1e-6, "tightness ratio");
  o.require(max_ratio <= 1.0 + 1e-9, "ratio above 1");

  // Equal endpoint values: the function is constant on the segment.
  double max_delta = 0.0;
  IntervalSpace is;
  const auto leb = interval_length(is);
  const RealVector a{1.0, -2.0, 0.5};
  const auto linear = from_callable(e, "<a,x>", [a](const RealVector& x) { return dot(a, x); });
  for (int k = 0; k < 50; ++k) {
    const double w = uniform(rng, 0.0, 0.5);
    const double s1 = uniform(rng, 0.0, 1.0 - w);
    const double s2 = uniform(rng, 0.0, 1.0 - w);
    const Interval i(s1, s1 + w);
    const Interval j(s2, s2 + w);
    if (is.distance(i, j) > 1e-6) {
      const auto pts = segment_points(is, i, j, std::size_t{33});
      for (const auto& p : pts) max_delta = std::max(max_delta, std::abs(leb(p) - leb(i)));
    }
    const RealVector x = e.sample(rng);
    RealVector y = e.sample(rng);
    // Move y onto the level set of x.
    const double shift = (dot(a, x) - dot(a, y)) / dot(a, a);
    for (std::size_t c = 0; c < 3; ++c) y[c] += shift * a[c];
    for (const auto& p : segment_points(e, x, y, std::size_t{33})) {
      max_delta = std::max(max_delta, std::abs(linear(p) - linear(x)));
    }
  }
  o.require(max_delta <= 1e-9, "equal-endpoint case not constant");
  o.detail << " segments=" << segments << " failures=" << failures << " ratio=[" << min_ratio << ", " << max_ratio
           << "] equal_endpoint_max=" << max_delta;
  return o;
}

Outcome criterion4() {
  Outcome o;
  int both = 0;
  int inconsistent = 0;
  for (const auto& e : catalog::all_entries()) {
    const auto [x, y] = catalog::finite_pair(e.f, 401);
    const bool mid = midpoint_convexity_check(e.f.space(), e.f, 10000, 402).passed();
    const bool dy = dyadic_convexity_check(e.f.space(), e.f, x, y, 10).passed();
    if (!(mid && dy)) continue;
    ++both;
    if (!verify_wconvex(e.f.space(), e.f, 10000, 403).passed()) {
      ++inconsistent;
      o.detail << " {" << e.name << "}";
    }
  }
  o.require(inconsistent == 0, "inconsistency");
  o.require(both >= 12, "too few functions passed both checks");
  o.detail << " midpoint_and_dyadic=" << both << " inconsistencies=" << inconsistent;
  return o;
}

Outcome criterion5() {
  Outcome o;
  EuclideanSpace e(2);
  const RealVector zero{0, 0};
  const auto f = distance_to_point(e, zero, ScalarMap::square());
  const auto r = local_lipschitz_from_bound(e, f, zero, 1.0, 0.5, 1.0, 10000, 501);
  o.require(!r.precondition_failed, "|f| <= M");
  o.require(r.constant == 4.0, "constant");
  o.require(r.passed, "Lipschitz bound");
  o.require(r.pairs_checked == 10000, "pair count");
  const auto above = bound_above_check(e, distance_to_point(e, RealVector{0.5, 0}, ScalarMap::square()), zero, 1.0,
                                       2.25, 10000, 502);
  o.require(above.passed(), "bound above");
  o.detail << " pairs=" << r.pairs_checked << " max_ratio=" << r.max_ratio << " bound=" << r.constant
           << " bound_above=" << to_string(above.status);
  return o;
}

Outcome criterion6() {
  Outcome o;
  int agree = 0;
  int total = 0;
  for (const auto& e : catalog::all_entries()) {
    ++total;
    const bool w = verify_wconvex(e.f.space(), e.f, 10000, 601).passed();
    const bool epi = epigraph_convexity_check(e.f.space(), e.f, 10000, 601).passed();
    if (w == epi) ++agree;
    else o.detail << " {disagree " << e.name << "}";
  }
  int sublevel = 0;
  for (const auto& e : catalog::convex_entries()) {
    if (sublevel_convexity_check(e.f.space(), e.f, e.h, 2000, 602).passed()) ++sublevel;
  }
  const auto step = catalog::step();
  const bool step_sub = sublevel_convexity_check(step.space(), step, 0.5, 2000, 603).passed();
  const bool step_w = verify_wconvex(step.space(), step, 10000, 603).failed();
  o.require(agree == total, "epigraph disagreement");
  o.require(sublevel == static_cast<int>(catalog::convex_entries().size()), "sublevel");
  o.require(step_sub && step_w, "quasiconvex step");
  o.detail << " agree=" << agree << "/" << total << " sublevel=" << sublevel << " step_sublevel=" << step_sub
           << " step_fails_wconvex=" << step_w;
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  EuclideanSpace e(2, Norm::l2, 4.0);
  const RealVector c{0.5, -0.25};
  const RealVector lo{-1, -1};
  const RealVector hi{1, 0.5};
  const auto disk = ball_set(e, c, 1.0);
  const auto box = box_set(e, lo, hi);
  Rng rng(701);
  double err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const RealVector x = e.sample(rng);
    const auto& set = k % 2 == 0 ? disk : box;
    const double ref = k % 2 == 0 ? oracle::l2_disk_distance(x, c, 1.0) : oracle::l2_box_distance(x, lo, hi);
    err = std::max(err, std::abs(project(e, set, x).distance - ref));
  }
  o.require(err <= 1e-6, "projection error");

  std::vector<RealVector> qs;
  for (int k = 0; k < 10; ++k) qs.push_back(e.sample(rng));
  ChebyshevConfig cc;
  cc.strict_certified = true;
  const double l2_diam = chebyshev_diagnostic(e, box, qs, cc).max_diameter;
  EuclideanSpace linf(2, Norm::linf);
  const double linf_diam =
      chebyshev_diagnostic(linf, segment_set(linf, RealVector{-1, 1}, RealVector{1, 1}), std::vector<RealVector>{RealVector{0, 0}})
          .max_diameter;
  o.require(l2_diam <= 1e-6, "l2 diameter");
  o.require(linf_diam >= 0.5, "linf diameter");

  const bool l2 = strict_space_check(EuclideanSpace(2, Norm::l2), 10000, 702).passed();
  const bool l1 = strict_space_check(EuclideanSpace(2, Norm::l1), 10000, 702).failed();
  const bool li = strict_space_check(EuclideanSpace(2, Norm::linf), 10000, 702).failed();
  o.require(l2 && l1 && li, "strict space classification");
  const double secs = seconds_since(t0);
  o.require(secs <= 60.0, "over 60 s");
  o.detail << " projection_err=" << err << " l2_diameter=" << l2_diam << " linf_diameter=" << linf_diam
           << " strict(l2,l1,linf)=" << l2 << l1 << li << " time=" << secs << "s";
  return o;
}

Outcome criterion8() {
  Outcome o;
  EuclideanSpace e(2, Norm::l2, 3.0);
  const std::vector<MapUnderTest<EuclideanSpace>> maps = {
      contraction_map(e, RealVector{0, 0}, 0.5),
      reflection_map(e, RealVector{1, 1}),
      rotation_map(e, std::numbers::pi / 2),
      affine_map(e, {{0.5, 0}, {0, 0.5}}, {1, 1}),
  };
  for (const auto& m : maps) {
    const auto r = mann_iterate(e, m, RealVector{2, -1}, MannSchedule::constant(0.5), 1e-6, 100000);
    o.require(r.converged && r.residual < 1e-6, m.label());
    o.detail << " " << m.label() << ":" << r.iterations;
  }
  const auto oracle_rep = residual_minimizer_oracle(e, maps[3]);
  o.require(oracle_rep.residual <= 1e-5, "oracle residual");
  o.require(!oracle_rep.inconsistent, "oracle inconsistent");
  o.detail << " oracle_residual=" << oracle_rep.residual;
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst = 0.0;
  bool passed = false;
  const auto four = axiom_suite(4, worst, passed);
  o.require(!g_axiom_reports.empty(), "criterion 1 did not run");
  o.require(four == g_axiom_reports, "reports differ");
  o.detail << " verdicts=" << four.size() << " identical=" << (four == g_axiom_reports);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail << " exception: " << ex.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s%s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
