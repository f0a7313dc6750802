#pragma once

// Scenario files: a JSON description of one space with named points, sets,
// functions and maps, plus a list of tasks (verify, project, chebyshev,
// fixpoint, proximality, minimize). Running a scenario produces a RunReport.
//
// A file may also hold a suite: {"scenarios": [ ... ]}.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wconvex/axioms.hpp"
#include "wconvex/core.hpp"
#include "wconvex/distance_map.hpp"
#include "wconvex/fixed_point.hpp"
#include "wconvex/functions.hpp"
#include "wconvex/minimize.hpp"
#include "wconvex/projection.hpp"
#include "wconvex/spaces/any_space.hpp"
#include "wconvex/spaces/ball.hpp"
#include "wconvex/spaces/euclidean.hpp"
#include "wconvex/spaces/interval.hpp"
#include "wconvex/spaces/product.hpp"
#include "wconvex/verdict.hpp"
#include "wconvex/verify.hpp"

#ifndef WCONVEX_VERSION
#define WCONVEX_VERSION "0.0.0"
#endif

namespace wconvex {

inline constexpr int kSchemaVersion = 1;

/// Invalid scenario: parse failure, unknown kind, unresolved name or bad
/// value. `where` is a JSON path such as "tasks[2].fn".
class config_error : public std::runtime_error {
 public:
  config_error(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

namespace scenario_detail {

inline std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i];
  return s;
}

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw config_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw config_error(path, "missing field '" + key + "'");
  return *it;
}

inline std::string kind_of(const json& j, const std::string& path, const std::vector<std::string>& valid) {
  const json& k = require(j, "kind", path);
  if (!k.is_string()) throw config_error(path + ".kind", "expected a string");
  const auto s = k.get<std::string>();
  if (std::find(valid.begin(), valid.end(), s) == valid.end()) {
    throw config_error(path + ".kind", "unknown kind '" + s + "' (valid: " + join(valid) + ")");
  }
  return s;
}

inline double number(const json& j, const std::string& key, const std::string& path,
                     std::optional<double> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    throw config_error(path, "missing field '" + key + "'");
  }
  if (!it->is_number()) throw config_error(path + "." + key, "expected a number");
  return it->get<double>();
}

inline std::size_t count(const json& j, const std::string& key, const std::string& path,
                         std::optional<std::size_t> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    throw config_error(path, "missing field '" + key + "'");
  }
  if (!it->is_number_integer() || it->get<long long>() < 1) {
    throw config_error(path + "." + key, "expected a positive integer");
  }
  return it->get<std::size_t>();
}

inline std::string text(const json& j, const std::string& key, const std::string& path,
                        std::optional<std::string> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    throw config_error(path, "missing field '" + key + "'");
  }
  if (!it->is_string()) throw config_error(path + "." + key, "expected a string");
  return it->get<std::string>();
}

inline bool flag(const json& j, const std::string& key, const std::string& path, bool fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) throw config_error(path + "." + key, "expected true or false");
  return it->get<bool>();
}

inline RealVector real_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw config_error(path, "expected an array of numbers");
  RealVector v;
  for (const auto& c : j) {
    if (!c.is_number()) throw config_error(path, "expected an array of numbers");
    v.push_back(c.get<double>());
  }
  return v;
}

/// Converts library exceptions raised while building an object into
/// config errors at `path`.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(path, e.what());
  }
}

}  // namespace scenario_detail

// ---------------------------------------------------------------------------
// Catalogue

struct CatalogEntry {
  std::string kind;
  std::string schema;
  std::string summary;
};

inline const std::vector<CatalogEntry>& space_catalog() {
  static const std::vector<CatalogEntry> c = {
      {"euclidean", R"({"kind":"euclidean","dim":2,"norm":"l1|l2|linf","sample_radius":10})",
       "R^n with an l1, l2 or l-infinity norm and W(x,y;t) = (1-t)x + ty"},
      {"ball", R"({"kind":"ball","dim":3,"sample_radius":5})",
       "closed balls B(c,r), d = |c1-c2| + |r1-r2|, points {center, radius}"},
      {"interval", R"({"kind":"interval"})", "closed intervals [a,b] in [0,1] with the Hausdorff distance, points {a, b}"},
      {"product", R"({"kind":"product","left":{...},"right":{...},"metric":"d1|d2"})",
       "X x Y with coordinatewise W; points [left, right]"},
  };
  return c;
}

inline const std::vector<CatalogEntry>& function_catalog() {
  static const std::vector<CatalogEntry> c = {
      {"dist", R"({"kind":"dist","point":P,"g":"identity|square|abs|exp|power:<a>"})", "g(d(x, point))"},
      {"compose", R"({"kind":"compose","fn":F,"g":"square|exp|..."})", "g(f(x)) for increasing convex g"},
      {"scale", R"({"kind":"scale","fn":F,"alpha":2})", "alpha f, alpha >= 0"},
      {"sum", R"({"kind":"sum","fns":[F,...]})", "sum of functions"},
      {"conical", R"({"kind":"conical","fns":[F,...],"weights":[...]})", "nonnegative combination"},
      {"max", R"({"kind":"max","fns":[F,...]})", "pointwise maximum"},
      {"sup", R"({"kind":"sup","fns":[F,...]})", "pointwise supremum of a finite family"},
      {"restrict", R"({"kind":"restrict","fn":F,"set":S})", "f on a convex set, +inf outside"},
      {"indicator", R"({"kind":"indicator","set":S})", "0 on the set, +inf outside"},
      {"negate", R"({"kind":"negate","fn":F})", "-f (generally not W-convex)"},
      {"lebesgue", R"({"kind":"lebesgue"})", "interval length b - a (interval space)"},
      {"ball_size", R"({"kind":"ball_size"})", "|center| + radius (ball space)"},
      {"distance_map", R"({"kind":"distance_map","set":S,"budget":40})", "distance to a convex set"},
      {"residual", R"({"kind":"residual","map":M,"exponent":1})", "d(x, T x)^exponent"},
  };
  return c;
}

inline const std::vector<CatalogEntry>& set_catalog() {
  static const std::vector<CatalogEntry> c = {
      {"whole", R"({"kind":"whole"})", "the whole space"},
      {"ball", R"({"kind":"ball","center":P,"radius":1})", "closed metric ball"},
      {"open_ball", R"({"kind":"open_ball","center":P,"radius":1,"band":1e-3})",
       "open-ball surrogate excluding a boundary band"},
      {"segment", R"({"kind":"segment","from":P,"to":P})", "the W-segment between two points"},
      {"box", R"({"kind":"box","lower":[...],"upper":[...]})", "axis-aligned box (euclidean)"},
      {"intersection", R"({"kind":"intersection","of":[S,...]})", "intersection of sets"},
      {"sublevel", R"({"kind":"sublevel","fn":F,"h":1})", "{x : f(x) <= h}"},
  };
  return c;
}

inline const std::vector<CatalogEntry>& map_catalog() {
  static const std::vector<CatalogEntry> c = {
      {"identity", R"({"kind":"identity"})", "T x = x"},
      {"contraction", R"({"kind":"contraction","center":P,"factor":0.5})", "T x = W(center, x; factor)"},
      {"reflection", R"({"kind":"reflection","center":P})", "point reflection through center"},
      {"rotation", R"({"kind":"rotation","angle":1.5707963,"center":[0,0]})", "plane rotation (euclidean, dim 2)"},
      {"affine", R"({"kind":"affine","matrix":[[...]],"offset":[...]})", "T x = A x + b (euclidean)"},
      {"quadratic_sine", R"({"kind":"quadratic_sine"})",
       "T(x) = (x1^2 - 1/2, sin(x2)/2), a continuous self-map of the unit disk (euclidean, dim 2)"},
  };
  return c;
}

inline const std::vector<CatalogEntry>& task_catalog() {
  static const std::vector<CatalogEntry> c = {
      {"verify", R"({"kind":"verify","property":"...","n":10000,"seed":1,...})", "run a property verifier"},
      {"project", R"({"kind":"project","set":S,"queries":[P,...],"starts":4,"iters":40})",
       "metric projection with an audit against set samples"},
      {"chebyshev", R"({"kind":"chebyshev","set":S,"queries":[P,...],"certify":true})",
       "near-optimal cluster diameters, optionally against a strict-convexity certificate"},
      {"fixpoint", R"({"kind":"fixpoint","map":M,"x0":P,"schedule":"constant:0.5","fp_tol":1e-6,"max_iter":100000})",
       "Mann iteration, optional residual-minimizer oracle and CSV trace"},
      {"proximality", R"({"kind":"proximality","set":S,"x":P,"budget":10})", "stabilization of projection distances"},
      {"minimize", R"({"kind":"minimize","fn":F,"starts":16})", "multistart minimization"},
  };
  return c;
}

inline const std::vector<std::string>& verify_properties() {
  static const std::vector<std::string> p = {
      "metric_axioms",      "convex_structure",   "segment_identities", "idempotence",
      "extension_roundtrip", "w_symmetry",        "wconvex",            "strict_wconvex",
      "midpoint_convexity", "dyadic_convexity",   "epigraph_convexity", "sublevel_convexity",
      "segment_lipschitz",  "local_lipschitz",    "bound_above",        "strict_space",
      "sphere_wconvex",     "set_convexity",      "nonexpansive"};
  return p;
}

namespace scenario_detail {

inline std::vector<std::string> kinds(const std::vector<CatalogEntry>& c) {
  std::vector<std::string> out;
  for (const auto& e : c) out.push_back(e.kind);
  return out;
}

}  // namespace scenario_detail

// ---------------------------------------------------------------------------
// Spaces

inline AnySpace build_space(const json& spec, const std::string& path = "space") {
  using namespace scenario_detail;
  const std::string kind = kind_of(spec, path, kinds(space_catalog()));
  return guarded(path, [&]() -> AnySpace {
    if (kind == "euclidean") {
      const auto dim = count(spec, "dim", path, 2);
      const Norm norm = norm_from_string(text(spec, "norm", path, "l2"));
      return AnySpace(EuclideanSpace(dim, norm, number(spec, "sample_radius", path, 10.0)));
    }
    if (kind == "ball") {
      return AnySpace(BallSpace(count(spec, "dim", path, 3), number(spec, "sample_radius", path, 5.0)));
    }
    if (kind == "interval") return AnySpace(IntervalSpace());
    const std::string metric = text(spec, "metric", path, "d1");
    if (metric != "d1" && metric != "d2") {
      throw config_error(path + ".metric", "unknown product metric '" + metric + "' (valid: d1, d2)");
    }
    return AnySpace(ProductSpace<AnySpace, AnySpace>(build_space(require(spec, "left", path), path + ".left"),
                                                     build_space(require(spec, "right", path), path + ".right"),
                                                     metric == "d1" ? ProductMetric::d1 : ProductMetric::d2));
  });
}

/// A fixed reference point of each space family, in payload form: the
/// origin, the unit ball at the origin, the full interval [0, 1].
inline json canonical_point(const json& spec) {
  const std::string kind = spec.value("kind", "");
  if (kind == "euclidean") return json(RealVector(spec.value("dim", std::size_t{2}), 0.0));
  if (kind == "ball") return {{"center", RealVector(spec.value("dim", std::size_t{3}), 0.0)}, {"radius", 1.0}};
  if (kind == "interval") return {{"a", 0.0}, {"b", 1.0}};
  if (kind == "product") return json::array({canonical_point(spec.at("left")), canonical_point(spec.at("right"))});
  throw config_error("space", "unknown space kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Lifting typed objects into the erased space

template <ConvexMetricSpace S>
ConvexSet<AnySpace> lift_set(const AnySpace& any, const ConvexSet<S>& c) {
  using P = point_t<S>;
  return ConvexSet<AnySpace>(
      any, c.label(), [c](const AnyPoint& p) { return c.contains(p.as<P>()); },
      [c](Rng& rng) -> std::optional<AnyPoint> {
        auto s = c.sample(rng);
        if (!s) return std::nullopt;
        return AnyPoint(std::move(*s));
      });
}

template <ConvexMetricSpace S>
WFn<AnySpace> lift_fn(const AnySpace& any, const WFn<S>& f) {
  using P = point_t<S>;
  return WFn<AnySpace>(any, f.label(), [f](const AnyPoint& p) { return f.evaluate(p.as<P>()); }, f.claim());
}

template <ConvexMetricSpace S>
MapUnderTest<AnySpace> lift_map(const AnySpace& any, const MapUnderTest<S>& m) {
  using P = point_t<S>;
  return MapUnderTest<AnySpace>(any, m.label(), [m](const AnyPoint& p) { return AnyPoint(m(p.as<P>())); });
}

/// T(x) = (x1^2 - 1/2, sin(x2) / 2): maps the unit disk into itself, is not
/// nonexpansive, and fixes ((1 - sqrt 3) / 2, 0).
inline MapUnderTest<EuclideanSpace> quadratic_sine_map(const EuclideanSpace& space) {
  if (space.dim() != 2) throw type_error("quadratic_sine needs a 2-dimensional space");
  return MapUnderTest<EuclideanSpace>(space, "quadratic_sine", [](const RealVector& x) {
    return RealVector{x[0] * x[0] - 0.5, std::sin(x[1]) / 2.0};
  });
}

// ---------------------------------------------------------------------------
// Scenario model

/// Named objects of one scenario. Sets and functions may reference each
/// other by name in any order; they are built on first use.
class ScenarioModel {
 public:
  ScenarioModel(const json& config, std::string path = "")
      : config_(config), path_(std::move(path)) {
    using namespace scenario_detail;
    space_spec_ = require(config_, "space", path_);
    space_ = std::make_unique<AnySpace>(build_space(space_spec_, prefix() + "space"));
    for (const char* section : {"points", "sets", "functions", "maps"}) {
      if (config_.contains(section) && !config_[section].is_object()) {
        throw config_error(prefix() + section, "expected an object of named entries");
      }
    }
  }

  const AnySpace& space() const { return *space_; }
  const json& space_spec() const { return space_spec_; }

  AnyPoint point(const json& j, const std::string& path) {
    if (j.is_string()) {
      const auto name = j.get<std::string>();
      if (auto it = points_.find(name); it != points_.end()) return it->second;
      if (config_.contains("points") && config_["points"].contains(name)) {
        AnyPoint p = payload(config_["points"][name], prefix() + "points." + name);
        points_.emplace(name, p);
        return p;
      }
      if (name == "origin") return payload(canonical_point(space_spec_), path);
      throw config_error(path, "unknown point '" + name + "' (defined: " + defined("points", {"origin"}) + ")");
    }
    return payload(j, path);
  }

  std::vector<AnyPoint> points(const json& j, const std::string& path) {
    if (!j.is_array()) throw config_error(path, "expected an array of points");
    std::vector<AnyPoint> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  ConvexSet<AnySpace> set(const json& j, const std::string& path) {
    if (j.is_string()) {
      const auto name = j.get<std::string>();
      if (auto it = sets_.find(name); it != sets_.end()) return it->second;
      if (!config_.contains("sets") || !config_["sets"].contains(name)) {
        throw config_error(path, "unknown set '" + name + "' (defined: " + defined("sets") + ")");
      }
      enter(name, path);
      ConvexSet<AnySpace> s = build_set(config_["sets"][name], prefix() + "sets." + name);
      leave(name);
      sets_.emplace(name, s);
      return s;
    }
    return build_set(j, path);
  }

  WFn<AnySpace> function(const json& j, const std::string& path) {
    if (j.is_string()) {
      const auto name = j.get<std::string>();
      if (auto it = functions_.find(name); it != functions_.end()) return it->second;
      if (!config_.contains("functions") || !config_["functions"].contains(name)) {
        throw config_error(path, "unknown function '" + name + "' (defined: " + defined("functions") + ")");
      }
      enter(name, path);
      WFn<AnySpace> f = build_function(config_["functions"][name], prefix() + "functions." + name);
      leave(name);
      functions_.emplace(name, f.relabel(name));
      return functions_.at(name);
    }
    return build_function(j, path);
  }

  MapUnderTest<AnySpace> map(const json& j, const std::string& path) {
    if (j.is_string()) {
      const auto name = j.get<std::string>();
      if (!config_.contains("maps") || !config_["maps"].contains(name)) {
        throw config_error(path, "unknown map '" + name + "' (defined: " + defined("maps") + ")");
      }
      return build_map(config_["maps"][name], prefix() + "maps." + name);
    }
    return build_map(j, path);
  }

  /// Builds every named object, so that typos surface before any task runs.
  void validate() {
    for (const char* section : {"points", "sets", "functions", "maps"}) {
      if (!config_.contains(section)) continue;
      for (const auto& [name, spec] : config_[section].items()) {
        const json ref = name;
        const std::string path = prefix() + section + "." + name;
        if (std::string(section) == "points") point(ref, path);
        if (std::string(section) == "sets") set(ref, path);
        if (std::string(section) == "functions") function(ref, path);
        if (std::string(section) == "maps") map(ref, path);
      }
    }
  }

 private:
  std::string prefix() const { return path_.empty() ? "" : path_ + "."; }

  std::string defined(const char* section, std::vector<std::string> extra = {}) const {
    if (config_.contains(section)) {
      for (const auto& [name, spec] : config_[section].items()) extra.push_back(name);
    }
    return extra.empty() ? "none" : scenario_detail::join(extra);
  }

  void enter(const std::string& name, const std::string& path) {
    if (!building_.insert(name).second) throw config_error(path, "circular reference through '" + name + "'");
  }
  void leave(const std::string& name) { building_.erase(name); }

  AnyPoint payload(const json& j, const std::string& path) const {
    return scenario_detail::guarded(path, [&] { return space_->from_json(j); });
  }

  const EuclideanSpace& euclidean(const std::string& path, const std::string& what) const {
    if (const auto* e = space_->target<EuclideanSpace>()) return *e;
    throw config_error(path, what + " needs a euclidean space, not " + space_->describe());
  }

  ConvexSet<AnySpace> build_set(const json& spec, const std::string& path) {
    using namespace scenario_detail;
    const std::string kind = kind_of(spec, path, kinds(set_catalog()));
    const AnySpace& sp = *space_;
    if (kind == "whole") return whole_space(sp);
    if (kind == "ball") {
      const AnyPoint c = point(require(spec, "center", path), path + ".center");
      const double r = number(spec, "radius", path);
      return guarded(path, [&] { return ball_set(sp, c, r); });
    }
    if (kind == "open_ball") {
      const AnyPoint c = point(require(spec, "center", path), path + ".center");
      const double r = number(spec, "radius", path);
      const double band = number(spec, "band", path, 1e-3);
      return guarded(path, [&] { return open_ball_set(sp, c, r, band); });
    }
    if (kind == "segment") {
      const AnyPoint a = point(require(spec, "from", path), path + ".from");
      const AnyPoint b = point(require(spec, "to", path), path + ".to");
      if (const auto* e = sp.target<EuclideanSpace>()) {
        return lift_set(sp, segment_set(*e, a.as<RealVector>(), b.as<RealVector>()));
      }
      return segment_set(sp, a, b);
    }
    if (kind == "box") {
      const EuclideanSpace& e = euclidean(path, "box");
      const RealVector lo = real_array(require(spec, "lower", path), path + ".lower");
      const RealVector hi = real_array(require(spec, "upper", path), path + ".upper");
      return guarded(path, [&] { return lift_set(sp, box_set(e, lo, hi)); });
    }
    if (kind == "intersection") {
      const json& of = require(spec, "of", path);
      if (!of.is_array() || of.empty()) throw config_error(path + ".of", "expected a nonempty array of sets");
      std::vector<ConvexSet<AnySpace>> parts;
      for (std::size_t i = 0; i < of.size(); ++i) parts.push_back(set(of[i], path + ".of[" + std::to_string(i) + "]"));
      return intersection_set(std::move(parts), count(spec, "budget", path, 2000));
    }
    const WFn<AnySpace> f = function(require(spec, "fn", path), path + ".fn");
    return sublevel_set(f, number(spec, "h", path), count(spec, "budget", path, 2000));
  }

  std::vector<WFn<AnySpace>> function_list(const json& spec, const std::string& path) {
    using namespace scenario_detail;
    const json& fns = require(spec, "fns", path);
    if (!fns.is_array() || fns.empty()) throw config_error(path + ".fns", "expected a nonempty array of functions");
    std::vector<WFn<AnySpace>> out;
    for (std::size_t i = 0; i < fns.size(); ++i) out.push_back(function(fns[i], path + ".fns[" + std::to_string(i) + "]"));
    return out;
  }

  WFn<AnySpace> build_function(const json& spec, const std::string& path) {
    using namespace scenario_detail;
    const std::string kind = kind_of(spec, path, kinds(function_catalog()));
    const AnySpace& sp = *space_;
    auto scalar = [&](const std::string& fallback) {
      const std::string tag = text(spec, "g", path, fallback);
      return guarded(path + ".g", [&] { return ScalarMap::parse(tag); });
    };
    if (kind == "dist") {
      const AnyPoint p = point(spec.contains("point") ? spec["point"] : json("origin"), path + ".point");
      return distance_to_point(sp, p, scalar("identity"));
    }
    if (kind == "compose") return compose_increasing_convex(function(require(spec, "fn", path), path + ".fn"), scalar(""));
    if (kind == "scale") {
      const WFn<AnySpace> f = function(require(spec, "fn", path), path + ".fn");
      const double alpha = number(spec, "alpha", path);
      return guarded(path, [&] { return scale(f, alpha); });
    }
    if (kind == "sum") return guarded(path, [&] { return sum(function_list(spec, path)); });
    if (kind == "conical") {
      auto fs = function_list(spec, path);
      const RealVector w = real_array(require(spec, "weights", path), path + ".weights");
      return guarded(path, [&] { return conical(fs, w); });
    }
    if (kind == "max") return guarded(path, [&] { return max_of(function_list(spec, path)); });
    if (kind == "sup") return guarded(path, [&] { return sup_family(function_list(spec, path)); });
    if (kind == "restrict") {
      return restrict(function(require(spec, "fn", path), path + ".fn"), set(require(spec, "set", path), path + ".set"));
    }
    if (kind == "indicator") return indicator(set(require(spec, "set", path), path + ".set"));
    if (kind == "negate") {
      const WFn<AnySpace> f = function(require(spec, "fn", path), path + ".fn");
      return WFn<AnySpace>(
          sp, "-" + f.label(),
          [f](const AnyPoint& x) {
            const ExtendedReal v = f.evaluate(x);
            if (!v.is_finite()) throw domain_error("negate: -infinity is not representable");
            return ExtendedReal(-v.value());
          },
          Convexity::unknown);
    }
    if (kind == "lebesgue") {
      const auto* s = sp.target<IntervalSpace>();
      if (!s) throw config_error(path, "lebesgue needs the interval space, not " + sp.describe());
      return lift_fn(sp, interval_length(*s));
    }
    if (kind == "ball_size") {
      const auto* s = sp.target<BallSpace>();
      if (!s) throw config_error(path, "ball_size needs the ball space, not " + sp.describe());
      return lift_fn(sp, ball_size(*s));
    }
    if (kind == "distance_map") {
      const ConvexSet<AnySpace> y = set(require(spec, "set", path), path + ".set");
      const auto budget = count(spec, "budget", path, 40);
      return guarded(path, [&] { return distance_map(sp, y, budget); });
    }
    const MapUnderTest<AnySpace> m = map(require(spec, "map", path), path + ".map");
    const double exponent = number(spec, "exponent", path, 1.0);
    return guarded(path, [&] { return residual_function(sp, m, exponent); });
  }

  MapUnderTest<AnySpace> build_map(const json& spec, const std::string& path) {
    using namespace scenario_detail;
    const std::string kind = kind_of(spec, path, kinds(map_catalog()));
    const AnySpace& sp = *space_;
    if (kind == "identity") return identity_map(sp);
    if (kind == "contraction") {
      const AnyPoint c = point(require(spec, "center", path), path + ".center");
      const double k = number(spec, "factor", path);
      return guarded(path, [&] { return contraction_map(sp, c, k); });
    }
    if (kind == "reflection") {
      const AnyPoint c = point(require(spec, "center", path), path + ".center");
      return guarded(path, [&] { return reflection_map(sp, c); });
    }
    const EuclideanSpace& e = euclidean(path, kind);
    if (kind == "rotation") {
      const double angle = number(spec, "angle", path);
      const RealVector c = spec.contains("center") ? real_array(spec["center"], path + ".center") : RealVector{0.0, 0.0};
      return guarded(path, [&] { return lift_map(sp, rotation_map(e, angle, c)); });
    }
    if (kind == "affine") {
      const json& rows = require(spec, "matrix", path);
      if (!rows.is_array()) throw config_error(path + ".matrix", "expected an array of rows");
      std::vector<RealVector> a;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        a.push_back(real_array(rows[i], path + ".matrix[" + std::to_string(i) + "]"));
      }
      const RealVector b = real_array(require(spec, "offset", path), path + ".offset");
      return guarded(path, [&] { return lift_map(sp, affine_map(e, a, b)); });
    }
    return guarded(path, [&] { return lift_map(sp, quadratic_sine_map(e)); });
  }

  json config_;
  std::string path_;
  json space_spec_;
  std::unique_ptr<AnySpace> space_;
  std::map<std::string, AnyPoint> points_;
  std::map<std::string, ConvexSet<AnySpace>> sets_;
  std::map<std::string, WFn<AnySpace>> functions_;
  std::set<std::string> building_;
};

// ---------------------------------------------------------------------------
// Reports

struct TaskResult {
  std::string kind;
  std::string label;
  Status status = Status::inconclusive;
  json detail = json::object();
  double millis = 0.0;
};

struct RunReport {
  std::string scenario;
  std::string version = WCONVEX_VERSION;
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 0;
  json config = json::object();
  std::vector<TaskResult> tasks;
  std::size_t workers = 1;
  double total_millis = 0.0;

  std::size_t count(Status s) const {
    return static_cast<std::size_t>(
        std::count_if(tasks.begin(), tasks.end(), [s](const TaskResult& t) { return t.status == s; }));
  }
  bool any_failed() const { return count(Status::failed) > 0; }
};

/// Everything outside "runtime" is a deterministic function of the config.
inline json report_to_json(const RunReport& r) {
  json tasks = json::array();
  json task_ms = json::array();
  for (std::size_t i = 0; i < r.tasks.size(); ++i) {
    const auto& t = r.tasks[i];
    tasks.push_back({{"index", i}, {"kind", t.kind}, {"label", t.label}, {"status", to_string(t.status)},
                     {"result", t.detail}});
    task_ms.push_back(t.millis);
  }
  return {{"artifact", "wconvex"},
          {"version", r.version},
          {"schema_version", r.schema_version},
          {"scenario", r.scenario},
          {"seed", r.seed},
          {"config", r.config},
          {"tasks", tasks},
          {"summary",
           {{"passed", r.count(Status::passed)},
            {"failed", r.count(Status::failed)},
            {"inconclusive", r.count(Status::inconclusive)}}},
          {"runtime", {{"workers", r.workers}, {"total_ms", r.total_millis}, {"task_ms", task_ms}}}};
}

inline RunReport report_from_json(const json& j) {
  RunReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.schema_version = j.at("schema_version").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.at("config");
  const json& task_ms = j.at("runtime").at("task_ms");
  for (std::size_t i = 0; i < j.at("tasks").size(); ++i) {
    const json& t = j.at("tasks")[i];
    TaskResult tr;
    tr.kind = t.at("kind").get<std::string>();
    tr.label = t.at("label").get<std::string>();
    tr.status = status_from_string(t.at("status").get<std::string>());
    tr.detail = t.at("result");
    tr.millis = i < task_ms.size() ? task_ms[i].get<double>() : 0.0;
    r.tasks.push_back(std::move(tr));
  }
  r.workers = j.at("runtime").at("workers").get<std::size_t>();
  r.total_millis = j.at("runtime").at("total_ms").get<double>();
  return r;
}

/// The report without its "runtime" section.
inline json deterministic_part(const json& report) {
  json out = report;
  out.erase("runtime");
  return out;
}

// ---------------------------------------------------------------------------
// Tasks

namespace scenario_detail {

inline json points_json(const AnySpace& sp, const std::vector<AnyPoint>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(sp.to_json(p));
  return out;
}

inline json lipschitz_json(const AnySpace& sp, const LipschitzReport<AnyPoint>& r) {
  json out = {{"passed", r.passed},
              {"constant", score_to_json(r.constant)},
              {"pairs_checked", r.pairs_checked},
              {"max_ratio", score_to_json(r.max_ratio)},
              {"max_excess", score_to_json(r.max_excess)},
              {"precondition_failed", r.precondition_failed}};
  if (r.alpha_passed) out["alpha_passed"] = *r.alpha_passed;
  if (!r.note.empty()) out["note"] = r.note;
  if (r.witness) out["witness"] = {sp.to_json(r.witness->first), sp.to_json(r.witness->second)};
  return out;
}

struct TaskContext {
  ScenarioModel& model;
  const json& spec;
  std::string path;
  std::uint64_t seed;
  RunOptions opts;
};

inline TaskResult run_verify(TaskContext& c) {
  const AnySpace& sp = c.model.space();
  const json& s = c.spec;
  const std::string& path = c.path;
  const std::string property = text(s, "property", path);
  const auto& valid = verify_properties();
  if (std::find(valid.begin(), valid.end(), property) == valid.end()) {
    throw config_error(path + ".property", "unknown property '" + property + "' (valid: " + join(valid) + ")");
  }
  const std::size_t n = count(s, "n", path, 1000);
  auto fn = [&] { return c.model.function(require(s, "fn", path), path + ".fn"); };
  auto domain = [&]() -> OptionalSet<AnySpace> {
    if (!s.contains("domain")) return std::nullopt;
    return c.model.set(s["domain"], path + ".domain");
  };
  auto pt = [&](const char* key) { return c.model.point(require(s, key, path), path + "." + key); };

  TaskResult r;
  r.kind = "verify";
  r.label = property;
  auto finish = [&](const Verdict<AnyPoint>& v, const std::string& fn_label) {
    r.status = v.status;
    r.detail = verdict_to_json(sp, v);
    r.detail["space"] = sp.describe();
    if (!fn_label.empty()) r.detail["function"] = fn_label;
    r.detail["n"] = n;
  };

  if (property == "metric_axioms") finish(check_metric_axioms(sp, n, c.seed, c.opts), "");
  else if (property == "convex_structure") finish(check_convex_structure(sp, n, c.seed, c.opts), "");
  else if (property == "segment_identities") finish(check_segment_identities(sp, n, c.seed, c.opts), "");
  else if (property == "idempotence") finish(check_idempotence(sp, n, c.seed, c.opts), "");
  else if (property == "extension_roundtrip") finish(check_extension_roundtrip(sp, n, c.seed, c.opts), "");
  else if (property == "w_symmetry") finish(w_symmetry_check(sp, n, c.seed, c.opts), "");
  else if (property == "strict_space") {
    finish(strict_space_check(sp, n, c.seed, number(s, "min_separation", path, 1e-2), c.opts), "");
  } else if (property == "set_convexity") {
    const auto y = c.model.set(require(s, "set", path), path + ".set");
    finish(set_convexity_check(sp, y, n, c.seed, c.opts), y.label());
  } else if (property == "nonexpansive") {
    const auto m = c.model.map(require(s, "map", path), path + ".map");
    finish(check_nonexpansive(sp, m, n, c.seed, domain(), c.opts), m.label());
  } else if (property == "wconvex") {
    const auto f = fn();
    finish(verify_wconvex(sp, f, n, c.seed, domain(), c.opts), f.label());
  } else if (property == "strict_wconvex") {
    const auto f = fn();
    finish(verify_strict_wconvex(sp, f, n, c.seed, number(s, "separation", path, 0.1), domain(), c.opts), f.label());
  } else if (property == "midpoint_convexity") {
    const auto f = fn();
    finish(midpoint_convexity_check(sp, f, n, c.seed, c.opts), f.label());
  } else if (property == "epigraph_convexity") {
    const auto f = fn();
    finish(epigraph_convexity_check(sp, f, n, c.seed, domain(), c.opts), f.label());
  } else if (property == "sublevel_convexity") {
    const auto f = fn();
    finish(sublevel_convexity_check(sp, f, number(s, "h", path), n, c.seed, count(s, "budget", path, 2000), c.opts),
           f.label());
  } else if (property == "dyadic_convexity") {
    const auto f = fn();
    const int levels = static_cast<int>(count(s, "levels", path, 10));
    const auto x = pt("x");
    const auto y = pt("y");
    finish(guarded(path, [&] { return dyadic_convexity_check(sp, f, x, y, levels, c.opts.tol); }), f.label());
  } else if (property == "sphere_wconvex") {
    const auto f = fn();
    const auto x0 = pt("x0");
    const double rho = number(s, "rho", path);
    const double sigma = number(s, "sigma", path);
    const bool strict = flag(s, "strict", path, true);
    finish(guarded(path, [&] { return sphere_wconvex_check(sp, f, x0, rho, sigma, n, c.seed, strict, 1e-2, c.opts); }),
           f.label());
  } else if (property == "bound_above") {
    const auto f = fn();
    const auto x0 = pt("x0");
    finish(bound_above_check(sp, f, x0, number(s, "r", path), number(s, "c", path), n, c.seed, c.opts), f.label());
  } else {
    // Lipschitz reports.
    const auto f = fn();
    LipschitzReport<AnyPoint> rep;
    if (property == "segment_lipschitz") {
      const auto x = pt("x");
      const auto y = pt("y");
      std::optional<double> alpha;
      if (s.contains("alpha")) alpha = number(s, "alpha", path);
      rep = guarded(path, [&] { return segment_lipschitz_check(sp, f, x, y, n, alpha, c.opts.tol); });
    } else {
      const auto x0 = pt("x0");
      rep = guarded(path, [&] {
        return local_lipschitz_from_bound(sp, f, x0, number(s, "r", path), number(s, "rho", path),
                                          number(s, "bound", path), n, c.seed, c.opts.tol);
      });
    }
    r.status = rep.passed && rep.alpha_passed.value_or(true) ? Status::passed : Status::failed;
    r.detail = lipschitz_json(sp, rep);
    r.detail["property"] = property;
    r.detail["space"] = sp.describe();
    r.detail["function"] = f.label();
    r.detail["n"] = n;
  }
  return r;
}

inline ProjectionConfig projection_config(const json& s, const std::string& path, std::uint64_t seed) {
  ProjectionConfig cfg;
  cfg.starts = count(s, "starts", path, cfg.starts);
  cfg.iters = count(s, "iters", path, cfg.iters);
  cfg.seed = seed;
  return cfg;
}

inline std::vector<AnyPoint> queries(TaskContext& c) {
  if (c.spec.contains("queries")) return c.model.points(c.spec["queries"], c.path + ".queries");
  return {c.model.point(require(c.spec, "x", c.path), c.path + ".x")};
}

inline TaskResult run_project(TaskContext& c) {
  const AnySpace& sp = c.model.space();
  const auto y = c.model.set(require(c.spec, "set", c.path), c.path + ".set");
  const auto xs = queries(c);
  const ProjectionConfig cfg = projection_config(c.spec, c.path, c.seed);
  const std::size_t audit = count(c.spec, "audit", c.path, 200);
  const double tol = number(c.spec, "tol", c.path, 1e-9);
  std::optional<RealVector> expected;
  if (c.spec.contains("expected")) {
    expected = real_array(c.spec["expected"], c.path + ".expected");
    if (expected->size() != xs.size()) throw config_error(c.path + ".expected", "needs one distance per query");
  }
  const double expected_tol = number(c.spec, "expected_tol", c.path, 1e-6);

  TaskResult r;
  r.kind = "project";
  r.label = y.label();
  r.status = Status::passed;
  json entries = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ProjectionConfig qc = cfg;
    qc.seed = splitmix64(c.seed + i);
    const auto res = project(sp, y, xs[i], qc);
    json e = {{"query", sp.to_json(xs[i])}, {"iterations", res.iterations}, {"converged", res.converged},
              {"sampler_exhausted", res.sampler_exhausted}};
    if (!res.best) {
      if (r.status == Status::passed) r.status = Status::inconclusive;
      entries.push_back(e);
      continue;
    }
    e["best"] = sp.to_json(*res.best);
    e["distance"] = res.distance;
    e["candidates"] = res.candidates.size();
    e["candidate_diameter"] = diameter(sp, res.candidates);
    bool ok = y.contains(*res.best);
    e["member"] = ok;
    // No sampled member may be closer than the reported distance.
    double worst = -std::numeric_limits<double>::infinity();
    std::optional<AnyPoint> closer;
    for (std::size_t k = 0; k < audit; ++k) {
      Rng rng = sample_rng(splitmix64(c.seed ^ 0xa0d17ULL), i * audit + k);
      const auto s = y.sample(rng);
      if (!s) continue;
      const double excess = relative_excess(res.distance, sp.distance(xs[i], *s));
      if (excess > worst) {
        worst = excess;
        closer = *s;
      }
    }
    e["audit_worst"] = score_to_json(worst);
    if (worst > tol) {
      ok = false;
      e["closer_member"] = sp.to_json(*closer);
    }
    if (expected) {
      const double err = std::abs(res.distance - (*expected)[i]);
      e["expected"] = (*expected)[i];
      e["error"] = err;
      if (err > expected_tol) ok = false;
    }
    if (!ok) r.status = Status::failed;
    entries.push_back(e);
  }
  r.detail = {{"set", y.label()}, {"space", sp.describe()}, {"entries", entries}};
  return r;
}

inline TaskResult run_chebyshev(TaskContext& c) {
  const AnySpace& sp = c.model.space();
  const auto y = c.model.set(require(c.spec, "set", c.path), c.path + ".set");
  const auto xs = queries(c);
  ChebyshevConfig cfg;
  cfg.projection.starts = count(c.spec, "starts", c.path, cfg.projection.starts);
  cfg.projection.iters = count(c.spec, "iters", c.path, cfg.projection.iters);
  cfg.projection.seed = c.seed;
  cfg.uniqueness_tol = number(c.spec, "uniqueness_tol", c.path, cfg.uniqueness_tol);

  TaskResult r;
  r.kind = "chebyshev";
  r.label = y.label();
  json certificate = nullptr;
  if (flag(c.spec, "certify", c.path, false)) {
    const auto v = strict_space_check(sp, count(c.spec, "certify_n", c.path, 2000), c.seed, 1e-2, c.opts);
    cfg.strict_certified = v.passed();
    certificate = verdict_to_json(sp, v);
  }
  const auto rep = guarded(c.path, [&] { return chebyshev_diagnostic(sp, y, xs, cfg); });
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json j = {{"query", sp.to_json(e.query)}, {"distance", e.distance}, {"diameter", e.diameter},
              {"candidates", e.candidates}, {"unique", e.unique}, {"inconsistent", e.inconsistent}};
    if (e.best) j["best"] = sp.to_json(*e.best);
    entries.push_back(j);
  }
  r.status = rep.any_inconsistent ? Status::failed : Status::passed;
  if (c.spec.contains("expect_unique")) {
    const bool want = flag(c.spec, "expect_unique", c.path, true);
    const bool all_unique = std::all_of(rep.entries.begin(), rep.entries.end(), [](const auto& e) { return e.unique; });
    if (want != all_unique) r.status = Status::failed;
  }
  r.detail = {{"set", y.label()},
              {"space", sp.describe()},
              {"max_diameter", rep.max_diameter},
              {"strict_certified", rep.strict_certified},
              {"any_inconsistent", rep.any_inconsistent},
              {"entries", entries}};
  if (!certificate.is_null()) r.detail["certificate"] = certificate;
  return r;
}

inline TaskResult run_fixpoint(TaskContext& c) {
  const AnySpace& sp = c.model.space();
  const json& s = c.spec;
  const auto m = c.model.map(require(s, "map", c.path), c.path + ".map");
  const AnyPoint x0 = c.model.point(s.contains("x0") ? s["x0"] : json("origin"), c.path + ".x0");
  const MannSchedule schedule =
      guarded(c.path + ".schedule", [&] { return MannSchedule::parse(text(s, "schedule", c.path, "constant")); });
  const double fp_tol = number(s, "fp_tol", c.path, 1e-6);
  const std::size_t max_iter = count(s, "max_iter", c.path, 100000);
  OptionalSet<AnySpace> domain;
  if (s.contains("domain")) domain = c.model.set(s["domain"], c.path + ".domain");

  TaskResult r;
  r.kind = "fixpoint";
  r.label = m.label();
  const auto res = guarded(c.path, [&] { return mann_iterate(sp, m, x0, schedule, fp_tol, max_iter); });
  r.detail = {{"map", m.label()},
              {"space", sp.describe()},
              {"schedule", schedule.describe()},
              {"fp_tol", fp_tol},
              {"iterations", res.iterations},
              {"residual", res.residual},
              {"point", sp.to_json(res.point)},
              {"converged", res.converged},
              {"diverged", res.diverged},
              {"initial_residual", res.trace.front()}};
  if (s.contains("trace")) {
    const std::string trace_path = text(s, "trace", c.path);
    std::ofstream out(trace_path);
    if (!out) throw config_error(c.path + ".trace", "cannot write '" + trace_path + "'");
    write_trace_csv(out, res.trace);
    r.detail["trace"] = trace_path;
  }
  r.status = res.converged ? Status::passed : Status::inconclusive;

  if (flag(s, "oracle", c.path, false)) {
    ResidualOracleConfig ocfg;
    ocfg.exponent = number(s, "exponent", c.path, ocfg.exponent);
    ocfg.strict_samples = count(s, "strict_n", c.path, ocfg.strict_samples);
    ocfg.separation = number(s, "separation", c.path, ocfg.separation);
    ocfg.fp_tol = number(s, "oracle_tol", c.path, 1e-5);
    ocfg.seed = c.seed;
    ocfg.minimize.seed = splitmix64(c.seed);
    const auto o = guarded(c.path, [&] { return residual_minimizer_oracle(sp, m, ocfg, domain, c.opts); });
    json oj = {{"strict", verdict_to_json(sp, o.strict)}, {"certified", o.certified}, {"minimized", o.minimized},
               {"residual", score_to_json(o.residual)}, {"fixed_point", o.fixed_point},
               {"inconsistent", o.inconsistent}};
    if (o.minimizer) oj["minimizer"] = sp.to_json(*o.minimizer);
    r.detail["oracle"] = oj;
    if (o.inconsistent) r.status = Status::failed;
  }

  if (flag(s, "compact", c.path, false)) {
    if (!domain) throw config_error(c.path, "compact mode needs a domain");
    MinimizeConfig mcfg;
    mcfg.seed = splitmix64(c.seed ^ 0xc0ULL);
    const auto rep = guarded(c.path, [&] {
      return compact_fixed_point_scenario(sp, m, *domain, x0, fp_tol, max_iter, mcfg, count(s, "n", c.path, 1000),
                                          c.seed);
    });
    json cj = {{"self_map", verdict_to_json(sp, rep.self_map)},
               {"mann_converged", rep.mann.converged},
               {"mann_residual", rep.mann.residual},
               {"min_residual", score_to_json(rep.min_residual)},
               {"fixed_point_found", rep.fixed_point_found}};
    if (rep.minimizer) cj["minimizer"] = sp.to_json(*rep.minimizer);
    r.detail["compact"] = cj;
    if (rep.self_map.failed()) r.status = Status::failed;
    else if (rep.fixed_point_found && r.status == Status::inconclusive) r.status = Status::passed;
  }
  return r;
}

inline TaskResult run_proximality(TaskContext& c) {
  const AnySpace& sp = c.model.space();
  const auto y = c.model.set(require(c.spec, "set", c.path), c.path + ".set");
  const AnyPoint x = c.model.point(require(c.spec, "x", c.path), c.path + ".x");
  const std::size_t budget = count(c.spec, "budget", c.path, 10);
  const double tol = number(c.spec, "tol", c.path, 1e-9);
  const auto rep = proximality_probe(sp, y, x, budget, tol);
  TaskResult r;
  r.kind = "proximality";
  r.label = y.label();
  r.status = rep.stabilized ? Status::passed : Status::inconclusive;
  r.detail = {{"set", y.label()}, {"stabilized", rep.stabilized}, {"distances", rep.distances},
              {"at_open_boundary", rep.at_open_boundary}};
  if (rep.best) r.detail["best"] = sp.to_json(*rep.best);
  return r;
}

inline TaskResult run_minimize(TaskContext& c) {
  const AnySpace& sp = c.model.space();
  const auto f = c.model.function(require(c.spec, "fn", c.path), c.path + ".fn");
  MinimizeConfig cfg;
  cfg.starts = count(c.spec, "starts", c.path, cfg.starts);
  cfg.max_iter = count(c.spec, "max_iter", c.path, cfg.max_iter);
  cfg.seed = c.seed;
  OptionalSet<AnySpace> domain;
  if (c.spec.contains("domain")) domain = c.model.set(c.spec["domain"], c.path + ".domain");
  const auto res = guarded(c.path, [&] { return minimize(domain ? restrict(f, *domain) : f, cfg, domain); });
  TaskResult r;
  r.kind = "minimize";
  r.label = f.label();
  r.status = res.converged ? Status::passed : Status::inconclusive;
  r.detail = {{"function", f.label()}, {"value", score_to_json(res.value)}, {"converged", res.converged},
              {"iterations", res.iterations}, {"cluster_size", res.cluster.size()},
              {"cluster_diameter", res.cluster_diameter}};
  if (res.best) r.detail["best"] = sp.to_json(*res.best);
  return r;
}

}  // namespace scenario_detail

// ---------------------------------------------------------------------------
// Running

struct RunSettings {
  std::size_t workers = default_workers();
};

/// Parses JSON text; syntax errors become config errors carrying the line
/// and column.
inline json parse_config_text(const std::string& content, const std::string& origin) {
  try {
    return json::parse(content);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, content.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (content[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw config_error(origin + ":" + std::to_string(line) + ":" + std::to_string(column), what);
  }
}

inline json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

/// Checks the top level of one scenario: schema version, seed, task list.
inline void validate_scenario_shape(const json& cfg, const std::string& path) {
  using namespace scenario_detail;
  const std::string p = path.empty() ? "" : path + ".";
  if (!cfg.is_object()) throw config_error(path, "a scenario must be an object");
  const json& v = require(cfg, "schema_version", path);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    throw config_error(p + "schema_version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  auto seed_ok = [](const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  };
  if (cfg.contains("seed") && !seed_ok(cfg["seed"])) {
    throw config_error(p + "seed", "expected a nonnegative integer");
  }
  const json& tasks = require(cfg, "tasks", path);
  if (!tasks.is_array()) throw config_error(p + "tasks", "expected an array");
  if (tasks.empty()) throw config_error(p + "tasks", "task list is empty");
  const auto valid = kinds(task_catalog());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string tp = p + "tasks[" + std::to_string(i) + "]";
    kind_of(tasks[i], tp, valid);
    if (tasks[i].contains("seed") && !seed_ok(tasks[i]["seed"])) {
      throw config_error(tp + ".seed", "expected a nonnegative integer");
    }
  }
}

/// Runs one scenario. Config errors propagate; every other failure inside a
/// task is reported as a config error at that task.
inline RunReport run_scenario(const json& cfg, const RunSettings& settings = {}, const std::string& path = "") {
  using namespace scenario_detail;
  validate_scenario_shape(cfg, path);
  ScenarioModel model(cfg, path);
  model.validate();

  RunReport report;
  report.scenario = cfg.value("name", std::string("unnamed"));
  report.seed = cfg.value("seed", std::uint64_t{1});
  report.config = cfg;
  report.workers = settings.workers;
  RunOptions opts;
  opts.workers = settings.workers;

  const auto start = std::chrono::steady_clock::now();
  const json& tasks = cfg["tasks"];
  const std::string p = path.empty() ? "" : path + ".";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const json& spec = tasks[i];
    const std::string tpath = p + "tasks[" + std::to_string(i) + "]";
    const std::uint64_t seed =
        spec.contains("seed") ? spec["seed"].get<std::uint64_t>() : splitmix64(report.seed + i);
    TaskContext ctx{model, spec, tpath, seed, opts};
    const auto t0 = std::chrono::steady_clock::now();
    TaskResult r = guarded(tpath, [&] {
      const std::string kind = spec["kind"].get<std::string>();
      if (kind == "verify") return run_verify(ctx);
      if (kind == "project") return run_project(ctx);
      if (kind == "chebyshev") return run_chebyshev(ctx);
      if (kind == "fixpoint") return run_fixpoint(ctx);
      if (kind == "proximality") return run_proximality(ctx);
      return run_minimize(ctx);
    });
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (spec.contains("expect")) {
      // Planted cases: the expected status counts as a pass.
      const Status want = guarded(tpath + ".expect", [&] { return status_from_string(text(spec, "expect", tpath)); });
      r.detail["observed_status"] = to_string(r.status);
      r.detail["expected_status"] = to_string(want);
      r.status = r.status == want ? Status::passed : Status::failed;
    }
    report.tasks.push_back(std::move(r));
  }
  report.total_millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

struct SuiteReport {
  std::string name;
  std::vector<RunReport> scenarios;

  bool any_failed() const {
    return std::any_of(scenarios.begin(), scenarios.end(), [](const RunReport& r) { return r.any_failed(); });
  }
  std::size_t count(Status s) const {
    std::size_t n = 0;
    for (const auto& r : scenarios) n += r.count(s);
    return n;
  }
};

inline bool is_suite(const json& cfg) { return cfg.is_object() && cfg.contains("scenarios"); }

/// Runs a scenario or a suite. Suite entries are inline scenarios or file
/// names relative to `base_dir`.
inline SuiteReport run_config(const json& cfg, const RunSettings& settings = {}, const std::string& base_dir = ".") {
  SuiteReport suite;
  if (!is_suite(cfg)) {
    suite.scenarios.push_back(run_scenario(cfg, settings));
    suite.name = suite.scenarios.front().scenario;
    return suite;
  }
  suite.name = cfg.value("name", std::string("suite"));
  const json& list = cfg["scenarios"];
  if (!list.is_array() || list.empty()) throw config_error("scenarios", "expected a nonempty array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "scenarios[" + std::to_string(i) + "]";
    if (list[i].is_string()) {
      const std::string file = base_dir + "/" + list[i].get<std::string>();
      suite.scenarios.push_back(run_scenario(load_config(file), settings, file));
    } else {
      suite.scenarios.push_back(run_scenario(list[i], settings, path));
    }
  }
  return suite;
}

inline json suite_to_json(const SuiteReport& s) {
  if (s.scenarios.size() == 1 && s.name == s.scenarios.front().scenario) return report_to_json(s.scenarios.front());
  json reports = json::array();
  for (const auto& r : s.scenarios) reports.push_back(report_to_json(r));
  return {{"artifact", "wconvex"},
          {"version", WCONVEX_VERSION},
          {"schema_version", kSchemaVersion},
          {"suite", s.name},
          {"scenarios", reports},
          {"summary",
           {{"passed", s.count(Status::passed)},
            {"failed", s.count(Status::failed)},
            {"inconclusive", s.count(Status::inconclusive)}}}};
}

/// Report JSON with every "runtime" block removed.
inline json strip_runtime(json j) {
  if (j.contains("scenarios")) {
    for (auto& r : j["scenarios"]) r = deterministic_part(r);
    return j;
  }
  return deterministic_part(j);
}

// ---------------------------------------------------------------------------
// Catalogue listing

inline std::vector<std::string> bundled_scenarios(const std::string& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline json catalog_json(const std::string& scenario_dir) {
  auto section = [](const std::vector<CatalogEntry>& c) {
    json out = json::array();
    for (const auto& e : c) out.push_back({{"kind", e.kind}, {"schema", e.schema}, {"summary", e.summary}});
    return out;
  };
  return {{"spaces", section(space_catalog())},
          {"functions", section(function_catalog())},
          {"sets", section(set_catalog())},
          {"maps", section(map_catalog())},
          {"tasks", section(task_catalog())},
          {"properties", verify_properties()},
          {"scalar_maps", ScalarMap::kinds()},
          {"schedules", {"constant", "constant:<t>", "harmonic"}},
          {"scenarios", bundled_scenarios(scenario_dir)}};
}

inline std::string catalog_text(const std::string& scenario_dir) {
  std::ostringstream out;
  auto section = [&](const char* title, const std::vector<CatalogEntry>& c) {
    out << title << " (" << c.size() << ")\n";
    for (const auto& e : c) out << "  " << e.kind << "\n      " << e.summary << "\n      " << e.schema << "\n";
    out << "\n";
  };
  section("spaces", space_catalog());
  section("functions", function_catalog());
  section("sets", set_catalog());
  section("maps", map_catalog());
  section("tasks", task_catalog());
  out << "verify properties\n  " << scenario_detail::join(verify_properties()) << "\n\n";
  out << "scalar maps g\n  " << scenario_detail::join(ScalarMap::kinds()) << "\n\n";
  out << "bundled scenarios (" << scenario_dir << ")\n";
  for (const auto& s : bundled_scenarios(scenario_dir)) out << "  " << s << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Command-line shorthands

/// "euclidean[:dim[:norm]]", "ball[:dim]", "interval", or a JSON object.
inline json space_spec_from_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return parse_config_text(arg, "--space");
  std::vector<std::string> parts;
  std::stringstream ss(arg);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.empty()) throw config_error("--space", "empty space");
  auto dim = [&](std::size_t i, std::size_t fallback) -> std::size_t {
    if (parts.size() <= i) return fallback;
    try {
      const long v = std::stol(parts[i]);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw config_error("--space", "bad dimension '" + parts[i] + "'");
  };
  if (parts[0] == "euclidean") {
    return {{"kind", "euclidean"}, {"dim", dim(1, 2)}, {"norm", parts.size() > 2 ? parts[2] : "l2"}};
  }
  if (parts[0] == "ball") return {{"kind", "ball"}, {"dim", dim(1, 3)}};
  if (parts[0] == "interval") return {{"kind", "interval"}};
  throw config_error("--space", "unknown space '" + arg + "' (valid: euclidean[:dim[:norm]], ball[:dim], interval, JSON)");
}

/// "dist[:g]", "neg_dist", "lebesgue", "ball_size", or a JSON object.
inline json function_spec_from_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return parse_config_text(arg, "--fn");
  if (arg == "dist") return {{"kind", "dist"}};
  if (arg.rfind("dist:", 0) == 0) return {{"kind", "dist"}, {"g", arg.substr(5)}};
  if (arg == "neg_dist") return {{"kind", "negate"}, {"fn", {{"kind", "dist"}}}};
  if (arg == "lebesgue" || arg == "ball_size") return {{"kind", arg}};
  throw config_error("--fn", "unknown function '" + arg + "' (valid: dist[:g], neg_dist, lebesgue, ball_size, JSON)");
}

/// A point payload from JSON text.
inline json point_from_arg(const std::string& arg, const std::string& flag) {
  if (arg.empty()) return "origin";
  if (arg.front() == '[' || arg.front() == '{') return parse_config_text(arg, flag);
  return arg;
}

}  // namespace wconvex
