#pragma once

// Outcome records of property verifiers and the sample-stream engine that
// produces them.
//
// A probe evaluates one sample index and returns a signed violation score
// (positive = the inequality is violated beyond its nominal value). The
// engine reduces scores with max, breaking ties by the lowest index, then
// replays the worst index to materialize the witness. Because each index has
// its own generator the verdict does not depend on the worker count.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wconvex/core.hpp"
#include "wconvex/sampling.hpp"

namespace wconvex {

enum class Status { passed, failed, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::passed:
      return "passed";
    case Status::failed:
      return "failed";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

inline Status status_from_string(const std::string& s) {
  if (s == "passed") return Status::passed;
  if (s == "failed") return Status::failed;
  if (s == "inconclusive") return Status::inconclusive;
  throw domain_error("unknown verdict status '" + s + "'");
}

template <class P>
struct Witness {
  std::vector<std::pair<std::string, P>> points;
  std::vector<std::pair<std::string, double>> params;
  std::string detail;
  std::uint64_t sample_index = 0;
  double violation = 0.0;

  Witness& point(std::string name, P p) {
    points.emplace_back(std::move(name), std::move(p));
    return *this;
  }
  Witness& param(std::string name, double v) {
    params.emplace_back(std::move(name), v);
    return *this;
  }

  const P& point(const std::string& name) const {
    for (const auto& [n, p] : points) {
      if (n == name) return p;
    }
    throw domain_error("witness has no point named '" + name + "'");
  }
  double param(const std::string& name) const {
    for (const auto& [n, v] : params) {
      if (n == name) return v;
    }
    throw domain_error("witness has no parameter named '" + name + "'");
  }
};

template <class P>
struct Verdict {
  std::string property;
  Status status = Status::inconclusive;
  std::size_t samples_checked = 0;
  std::size_t samples_skipped = 0;
  /// Largest violation score seen. For `lhs <= rhs` checks this is the
  /// relative excess; passing requires worst_violation <= tolerance.
  double worst_violation = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::optional<Witness<P>> witness;
  std::uint64_t seed = 0;
  std::string note;

  bool passed() const { return status == Status::passed; }
  bool failed() const { return status == Status::failed; }
  bool inconclusive() const { return status == Status::inconclusive; }
};

struct RunOptions {
  std::size_t workers = default_workers();
  Tolerances tol = kDefaultTolerances;
  /// A verdict is inconclusive when fewer than this many samples were
  /// actually checked.
  std::size_t min_checked = 1;
};

/// Result of probing one sample index. `checked == false` marks a skipped
/// sample (degenerate pair, unmet sampling precondition).
struct ProbeOutcome {
  bool checked = false;
  double violation = -std::numeric_limits<double>::infinity();

  static ProbeOutcome skip() { return {}; }
  static ProbeOutcome score(double v) { return {true, v}; }
};

namespace detail {

struct Reduction {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::uint64_t worst_index = std::numeric_limits<std::uint64_t>::max();

  void absorb(std::uint64_t index, const ProbeOutcome& o) {
    if (!o.checked) {
      ++skipped;
      return;
    }
    ++checked;
    // NaN scores count as violations.
    const double v = std::isnan(o.violation) ? std::numeric_limits<double>::infinity() : o.violation;
    if (v > worst || (v == worst && index < worst_index)) {
      worst = v;
      worst_index = index;
    }
  }

  void merge(const Reduction& other) {
    checked += other.checked;
    skipped += other.skipped;
    if (other.worst > worst || (other.worst == worst && other.worst_index < worst_index)) {
      worst = other.worst;
      worst_index = other.worst_index;
    }
  }
};

}  // namespace detail

/// Runs `probe(index, witness_or_null)` for index in [0, n) and reduces.
/// The probe must be pure in `index` (draw everything from
/// sample_rng(seed, index)).
template <class P, class Probe>
Verdict<P> run_probes(std::string property, std::size_t n, std::uint64_t seed, double tolerance,
                      Probe&& probe, const RunOptions& opts = {}) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(opts.workers, n == 0 ? 1 : n));
  std::vector<detail::Reduction> partial(workers);

  auto work = [&](std::size_t w) {
    // Contiguous blocks keep the reduction order independent of scheduling.
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      partial[w].absorb(i, probe(static_cast<std::uint64_t>(i), static_cast<Witness<P>*>(nullptr)));
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  detail::Reduction total;
  for (const auto& r : partial) total.merge(r);

  Verdict<P> v;
  v.property = std::move(property);
  v.seed = seed;
  v.tolerance = tolerance;
  v.samples_checked = total.checked;
  v.samples_skipped = total.skipped;
  v.worst_violation = total.worst;
  if (total.checked < std::max<std::size_t>(1, opts.min_checked)) {
    v.status = Status::inconclusive;
    v.note = "too few samples satisfied the sampling preconditions";
    return v;
  }
  if (v.worst_violation <= tolerance) {
    v.status = Status::passed;
    return v;
  }
  v.status = Status::failed;
  Witness<P> w;
  w.sample_index = total.worst_index;
  w.violation = total.worst;
  probe(total.worst_index, &w);
  v.witness = std::move(w);
  return v;
}

// ---------------------------------------------------------------------------
// Serialization

inline json score_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double score_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

template <ConvexMetricSpace S>
json witness_to_json(const S& space, const Witness<point_t<S>>& w) {
  json points = json::object();
  for (const auto& [name, p] : w.points) points[name] = space.to_json(p);
  json params = json::object();
  for (const auto& [name, v] : w.params) params[name] = score_to_json(v);
  json out = {{"sample_index", w.sample_index},
              {"violation", score_to_json(w.violation)},
              {"points", points},
              {"params", params}};
  if (!w.detail.empty()) out["detail"] = w.detail;
  return out;
}

template <ConvexMetricSpace S>
json verdict_to_json(const S& space, const Verdict<point_t<S>>& v) {
  json out = {{"property", v.property},
              {"status", to_string(v.status)},
              {"samples_checked", v.samples_checked},
              {"samples_skipped", v.samples_skipped},
              {"worst_violation", score_to_json(v.worst_violation)},
              {"tolerance", score_to_json(v.tolerance)},
              {"seed", v.seed}};
  if (!v.note.empty()) out["note"] = v.note;
  if (v.witness) out["witness"] = witness_to_json(space, *v.witness);
  return out;
}

template <ConvexMetricSpace S>
Verdict<point_t<S>> verdict_from_json(const S& space, const json& j) {
  Verdict<point_t<S>> v;
  v.property = j.at("property").get<std::string>();
  v.status = status_from_string(j.at("status").get<std::string>());
  v.samples_checked = j.at("samples_checked").get<std::size_t>();
  v.samples_skipped = j.at("samples_skipped").get<std::size_t>();
  v.worst_violation = score_from_json(j.at("worst_violation"));
  v.tolerance = score_from_json(j.at("tolerance"));
  v.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("note")) v.note = j.at("note").get<std::string>();
  if (j.contains("witness")) {
    const auto& wj = j.at("witness");
    Witness<point_t<S>> w;
    w.sample_index = wj.at("sample_index").get<std::uint64_t>();
    w.violation = score_from_json(wj.at("violation"));
    for (const auto& [name, pj] : wj.at("points").items()) w.point(name, space.from_json(pj));
    for (const auto& [name, vj] : wj.at("params").items()) w.param(name, score_from_json(vj));
    if (wj.contains("detail")) w.detail = wj.at("detail").get<std::string>();
    v.witness = std::move(w);
  }
  return v;
}

}  // namespace wconvex
