#pragma once

// One-dimensional searches shared by the boundary and transition finders.

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

namespace cvwork::search {

/// Shrinks [lo, hi] around the point where `pred` changes value, assuming
/// pred(lo) != pred(hi) and a single change in between. Returns the final bracket.
template <typename Pred>
std::pair<double, double> bisect(Pred&& pred, double lo, double hi, double width) {
  const bool at_lo = pred(lo);
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid) == at_lo)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

struct Extremum {
  double x;
  double value;
};

/// Golden-section maximisation of a unimodal `f` on [lo, hi].
template <typename F>
Extremum golden_section_max(F&& f, double lo, double hi, double width) {
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > width) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
    if (!(x1 < x2)) break;
  }
  // Endpoints are candidates too; the maximiser may sit on the boundary.
  Extremum best{x1, f1};
  if (f2 > best.value) best = {x2, f2};
  const double flo = f(lo);
  if (flo > best.value) best = {lo, flo};
  const double fhi = f(hi);
  if (fhi > best.value) best = {hi, fhi};
  return best;
}

/// Evaluates f on `points` equally spaced nodes of [lo, hi], then refines the
/// best node with golden-section search on its neighbouring cell. Nodes where
/// f is not finite are ignored. Returns value = -inf when no node is finite.
template <typename F>
Extremum scan_then_refine_max(F&& f, double lo, double hi, std::size_t points, double width) {
  const double step = (hi - lo) / static_cast<double>(points - 1);
  std::size_t best_i = points;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const double x = (i + 1 == points) ? hi : lo + step * static_cast<double>(i);
    const double v = f(x);
    if (std::isfinite(v) && v > best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i == points) return {lo, best};
  const double left = best_i == 0 ? lo : lo + step * static_cast<double>(best_i - 1);
  const double right = best_i + 1 >= points ? hi : lo + step * static_cast<double>(best_i + 1);
  auto guarded = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  };
  Extremum refined = golden_section_max(guarded, left, right, width);
  const double node_x = (best_i + 1 == points) ? hi : lo + step * static_cast<double>(best_i);
  if (refined.value < best) refined = {node_x, best};
  return refined;
}

}  // namespace cvwork::search
