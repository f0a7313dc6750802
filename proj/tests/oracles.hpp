#pragma once

// Reference computations that share no code with the library: brute-force
// Hausdorff distances, plain-loop norms, grid searches for nearest points,
// and a hand-written averaged iteration.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline double norm(const Vec& v, int p) {
  double s = 0.0;
  for (double c : v) {
    if (p == 1) s += std::fabs(c);
    else if (p == 2) s += c * c;
    else s = std::max(s, std::fabs(c));
  }
  return p == 2 ? std::sqrt(s) : s;
}

inline double dist(const Vec& a, const Vec& b, int p) {
  Vec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm(d, p);
}

/// Hausdorff distance of [a1, b1] and [a2, b2] from the definition, with
/// both sets discretized on `steps` + 1 points.
inline double hausdorff(double a1, double b1, double a2, double b2, int steps = 2000) {
  auto pts = [steps](double a, double b) {
    std::vector<double> v;
    for (int k = 0; k <= steps; ++k) v.push_back(a + (b - a) * k / steps);
    return v;
  };
  auto gap = [](double x, double a, double b) {
    if (x < a) return a - x;
    if (x > b) return x - b;
    return 0.0;
  };
  double h = 0.0;
  for (double x : pts(a1, b1)) h = std::max(h, gap(x, a2, b2));
  for (double y : pts(a2, b2)) h = std::max(h, gap(y, a1, b1));
  return h;
}

/// Euclidean closed forms.
inline double l2_disk_distance(const Vec& x, const Vec& c, double r) {
  return std::max(0.0, dist(x, c, 2) - r);
}

inline double l2_box_distance(const Vec& x, const Vec& lo, const Vec& hi) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = x[i] < lo[i] ? lo[i] - x[i] : (x[i] > hi[i] ? x[i] - hi[i] : 0.0);
    s += e * e;
  }
  return std::sqrt(s);
}

inline double l2_segment_distance(const Vec& x, const Vec& a, const Vec& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - a[i]) * (b[i] - a[i]);
    den += (b[i] - a[i]) * (b[i] - a[i]);
  }
  const double t = den == 0.0 ? 0.0 : std::clamp(num / den, 0.0, 1.0);
  Vec p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
  return dist(x, p, 2);
}

/// Points of a segment on a uniform parameter grid.
inline std::vector<Vec> segment_grid(const Vec& a, const Vec& b, int steps) {
  std::vector<Vec> out;
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    Vec p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = (1.0 - t) * a[i] + t * b[i];
    out.push_back(p);
  }
  return out;
}

/// Points of a 2-d box on a uniform grid.
inline std::vector<Vec> box_grid(const Vec& lo, const Vec& hi, int steps) {
  std::vector<Vec> out;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      out.push_back({lo[0] + (hi[0] - lo[0]) * i / steps, lo[1] + (hi[1] - lo[1]) * j / steps});
    }
  }
  return out;
}

struct NearestSet {
  double distance = std::numeric_limits<double>::infinity();
  double diameter = 0.0;
};

/// Minimum distance over candidate points and the diameter of the points
/// within `slack` of it.
inline NearestSet nearest(const Vec& x, const std::vector<Vec>& pts, int p, double slack) {
  NearestSet out;
  for (const auto& q : pts) out.distance = std::min(out.distance, dist(x, q, p));
  std::vector<const Vec*> near;
  for (const auto& q : pts) {
    if (dist(x, q, p) <= out.distance + slack) near.push_back(&q);
  }
  for (std::size_t i = 0; i < near.size(); ++i) {
    for (std::size_t j = i + 1; j < near.size(); ++j) out.diameter = std::max(out.diameter, dist(*near[i], *near[j], p));
  }
  return out;
}

/// x_{n+1} = (1 - t) x_n + t T(x_n) in R^n with the l2 residual.
inline std::size_t averaged_iterations(const std::function<Vec(const Vec&)>& map, Vec x, double t, double tol,
                                       std::size_t max_iter) {
  for (std::size_t n = 0; n < max_iter; ++n) {
    const Vec tx = map(x);
    if (dist(x, tx, 2) <= tol) return n;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (1.0 - t) * x[i] + t * tx[i];
  }
  return max_iter;
}

}  // namespace oracle
