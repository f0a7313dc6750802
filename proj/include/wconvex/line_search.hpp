#pragma once

// One-dimensional minimization of phi : [0, 1] -> R along a W-segment.
//
// A uniform grid is scanned first; golden-section search then refines the
// bracket around the best grid node. For unimodal phi (strictly convex
// geometry) the bracket contains the minimizer; otherwise the grid bounds
// the loss, and the returned value never exceeds the grid minimum.

#include <cmath>
#include <cstddef>
#include <limits>

namespace wconvex {

struct LineMinimum {
  double t = 0.0;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kLineGridPoints = 64;

/// Golden-section search on [lo, hi]; returns the best point visited.
template <class Phi>
LineMinimum golden_section(Phi&& phi, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
  LineMinimum best;
  auto visit = [&](double t) {
    const double v = phi(t);
    ++best.evaluations;
    if (v < best.value) {
      best.value = v;
      best.t = t;
    }
    return v;
  };
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = visit(c);
  double fd = visit(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = visit(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = visit(d);
    }
  }
  return best;
}

/// Minimizes phi over [0, 1]. The result satisfies
/// phi(t*) <= min over the 64-point grid.
template <class Phi>
LineMinimum golden_section_on_segment(Phi&& phi, double tol = 1e-12) {
  LineMinimum best;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < kLineGridPoints; ++k) {
    const double t = static_cast<double>(k) / (kLineGridPoints - 1);
    const double v = phi(t);
    ++best.evaluations;
    if (v < best.value) {
      best.value = v;
      best.t = t;
      best_k = k;
    }
  }
  const double step = 1.0 / (kLineGridPoints - 1);
  const double lo = best_k == 0 ? 0.0 : (best_k - 1) * step;
  const double hi = best_k + 1 >= kLineGridPoints ? 1.0 : (best_k + 1) * step;
  const LineMinimum refined = golden_section(phi, lo, hi, tol);
  best.evaluations += refined.evaluations;
  if (refined.value < best.value) {
    best.value = refined.value;
    best.t = refined.t;
  }
  return best;
}

}  // namespace wconvex
