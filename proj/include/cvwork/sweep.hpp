#pragma once

// Parameter sweeps over the standard form, maximum-work points along class
// boundaries, and the parameter values at which those maxima change character.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "cvwork/classification.hpp"
#include "cvwork/error.hpp"
#include "cvwork/gaussian.hpp"
#include "cvwork/parallel.hpp"
#include "cvwork/protocols.hpp"
#include "cvwork/search.hpp"

namespace cvwork {

struct Range {
  double lo;
  double hi;
};

struct Grid {
  std::size_t first;
  std::size_t second;
};

struct SweepRow {
  double a, b, c1, c2;
  bool physical, separable, steer_b_to_a, steer_a_to_b;
  std::optional<double> w_hom, w_het;  // present iff physical
};

struct SweepOptions {
  ProtocolKind protocol = ProtocolKind::Heterodyne;
  bool verify = false;  // trajectory cross-check on every 100th physical row
  unsigned threads = 0;
};

inline SweepRow evaluate_row(const StandardFormParams& p) {
  const ClassRecord cls = classify(p);
  SweepRow row{p.a, p.b, p.c1, p.c2, cls.physical, cls.separable, cls.steerable_b_to_a, cls.steerable_a_to_b,
               std::nullopt, std::nullopt};
  if (cls.physical) {
    row.w_hom = work_formula(p, ProtocolKind::HomodyneAverage);
    row.w_het = work_formula(p, ProtocolKind::Heterodyne);
  }
  return row;
}

inline constexpr double kTrajectoryTolerance = 1e-12;
inline constexpr std::size_t kVerifyStride = 100;

/// Reruns the protocol shot by shot on a 1% subsample of the physical rows and
/// compares with the closed forms. Returns the number of rows checked.
inline std::size_t verify_rows(const std::vector<SweepRow>& rows, ProtocolKind protocol) {
  const Vec2 outcome(0.731, -1.274);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < rows.size(); i += kVerifyStride) {
    const SweepRow& r = rows[i];
    if (!r.physical) continue;
    const StandardFormParams p{r.a, r.b, r.c1, r.c2};
    double shot = 0.0;
    double expected = 0.0;
    if (protocol == ProtocolKind::HomodyneAverage) {
      shot = 0.5 * (run_protocol(p, ProtocolKind::HomodyneX, outcome).work +
                    run_protocol(p, ProtocolKind::HomodyneP, outcome).work);
      expected = *r.w_hom;
    } else {
      shot = run_protocol(p, protocol, outcome).work;
      expected = protocol == ProtocolKind::Heterodyne ? *r.w_het : work_formula(p, protocol);
    }
    if (!(std::abs(shot - expected) < kTrajectoryTolerance))
      throw Error(ErrorCode::NumericalFailure, "trajectory work disagrees with the closed form");
    ++checked;
  }
  return checked;
}

namespace detail {

inline double grid_point(const Range& r, std::size_t i, std::size_t n) {
  if (i + 1 == n) return r.hi;
  return r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

inline void check_range(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
    throw Error(ErrorCode::BadRange, std::string(name) + " range is empty or not finite");
}

inline void check_grid(const Grid& g) {
  if (g.first < 2 || g.second < 2) throw Error(ErrorCode::BadRange, "grid needs at least 2 points per axis");
}

template <typename MakeParams>
std::vector<SweepRow> run_grid(const Grid& grid, const SweepOptions& opts, MakeParams&& make) {
  std::vector<SweepRow> rows(grid.first * grid.second);
  // Rows are filled by index, so the output order never depends on scheduling.
  parallel::for_each_task(grid.first, opts.threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < grid.second; ++j) rows[i * grid.second + j] = evaluate_row(make(i, j));
  });
  if (opts.verify) verify_rows(rows, opts.protocol);
  return rows;
}

}  // namespace detail

/// Rows over a x c with a = b and c1 = c, c2 = -c, in row-major (a outer) order.
inline std::vector<SweepRow> sweep_symmetric(Range a, Range c, Grid grid, const SweepOptions& opts = {}) {
  detail::check_range(a, "a");
  detail::check_range(c, "c");
  detail::check_grid(grid);
  if (a.lo <= 0.0) throw Error(ErrorCode::BadRange, "a must be positive");
  return detail::run_grid(grid, opts, [&](std::size_t i, std::size_t j) {
    const double av = detail::grid_point(a, i, grid.first);
    const double cv = detail::grid_point(c, j, grid.second);
    return StandardFormParams{av, av, cv, -cv};
  });
}

/// Rows over c1 x c2 at fixed (a, b) in the c1 <= 0, c2 >= 0 quadrant (c1 outer).
inline std::vector<SweepRow> sweep_quadrant(double a, double b, Range c1, Range c2, Grid grid,
                                            const SweepOptions& opts = {}) {
  detail::check_range(c1, "c1");
  detail::check_range(c2, "c2");
  detail::check_grid(grid);
  if (!std::isfinite(a) || !std::isfinite(b) || a <= 0.0 || b <= 0.0)
    throw Error(ErrorCode::BadRange, "a and b must be positive");
  const double edge = std::sqrt(a * b);
  if (c1.lo <= -edge || c1.hi > 0.0) throw Error(ErrorCode::BadRange, "c1 range must lie in (-sqrt(ab), 0]");
  if (c2.lo < 0.0 || c2.hi >= edge) throw Error(ErrorCode::BadRange, "c2 range must lie in [0, sqrt(ab))");
  return detail::run_grid(grid, opts, [&](std::size_t i, std::size_t j) {
    return StandardFormParams{a, b, detail::grid_point(c1, i, grid.first), detail::grid_point(c2, j, grid.second)};
  });
}

struct RedDot {
  BoundaryKind boundary;
  double c1_star;
  double c2_star;
  double w_star;
  bool at_edge;
};

inline constexpr std::size_t kRedDotScanPoints = 2001;
inline constexpr double kRedDotResolution = 1e-7;
inline constexpr double kEdgeTolerance = 1e-4;

/// Gap between the physical edge and the nonsteerability boundary at c1; positive
/// where Bob -> Alice steerable states exist. NaN where either curve is undefined.
inline double steering_gap(double a, double b, double c1) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (c1 > 0.0 || c1 * c1 >= a * b) return nan;
  const double radicand = b * (a + b / (c1 * c1 - a * b));
  if (!(radicand > 0.0)) return nan;
  const auto hi = physical_c2_max(a, b, c1);
  if (!hi || *hi < 0.0) return nan;
  return *hi - std::sqrt(radicand);
}

namespace detail {

inline double quadrant_edge(double a, double b) { return std::sqrt(a * b) * (1.0 - 1e-12); }

/// c1 range over which the named boundary is a curve in the quadrant.
inline std::optional<Range> boundary_domain(double a, double b, BoundaryKind kind) {
  const double ab = a * b;
  switch (kind) {
    case BoundaryKind::Separability: {
      // The upper PPT root reaches c2 = 0 where (ab - c1^2) ab = a^2 + b^2 - 1.
      const double sq = ab - (a * a + b * b - 1.0) / ab;
      if (!(sq > 0.0)) return std::nullopt;
      return Range{-std::sqrt(sq), 0.0};
    }
    case BoundaryKind::Physicality: {
      auto has_point = [&](double c1) {
        const auto hi = physical_c2_max(a, b, c1);
        return hi && *hi >= 0.0;
      };
      if (!has_point(0.0)) return std::nullopt;
      const double edge = quadrant_edge(a, b);
      if (has_point(-edge)) return Range{-edge, 0.0};
      return Range{search::bisect(has_point, -edge, 0.0, 1e-11).second, 0.0};
    }
    case BoundaryKind::NonsteerabilityBtoA: {
      const double edge = quadrant_edge(a, b);
      auto gap = [&](double c1) { return steering_gap(a, b, c1); };
      const auto best = search::scan_then_refine_max(gap, -edge, 0.0, kRedDotScanPoints, 1e-12);
      if (!(best.value >= 0.0)) return std::nullopt;
      auto inside = [&](double c1) { return gap(c1) >= 0.0; };
      Range r{-edge, 0.0};
      if (!inside(r.lo)) r.lo = search::bisect(inside, r.lo, best.x, 1e-11).second;
      if (!inside(r.hi)) r.hi = search::bisect(inside, best.x, r.hi, 1e-11).first;
      return r;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Maximum of the protocol's work along c2 = boundary_c2(kind, a, b, c1):
/// a 2001-point scan in c1 refined by golden-section search to 1e-7.
inline RedDot red_dot(double a, double b, BoundaryKind kind, ProtocolKind protocol) {
  if (!std::isfinite(a) || !std::isfinite(b) || a <= 0.0 || b <= 0.0)
    throw Error(ErrorCode::DomainError, "a and b must be positive");
  const auto domain = detail::boundary_domain(a, b, kind);
  if (!domain) throw Error(ErrorCode::EmptyBoundary, "boundary does not cross the quadrant");
  auto curve = [&](double c1) {
    try {
      return boundary_c2(kind, a, b, std::min(c1, 0.0));
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  auto along = [&](double c1) {
    const double c2 = curve(c1);
    if (!std::isfinite(c2)) return std::numeric_limits<double>::quiet_NaN();
    return work_formula({a, b, c1, c2}, protocol);
  };
  const auto best = search::scan_then_refine_max(along, domain->lo, domain->hi, kRedDotScanPoints, kRedDotResolution);
  if (!std::isfinite(best.value)) throw Error(ErrorCode::EmptyBoundary, "work is undefined along the boundary");
  RedDot dot{kind, best.x, curve(best.x), best.value, false};
  dot.at_edge = std::abs(dot.c1_star) <= kEdgeTolerance || std::abs(dot.c2_star) <= kEdgeTolerance;
  return dot;
}

inline constexpr double kTransitionScanStep = 0.01;
inline constexpr double kTransitionResolution = 1e-6;

namespace detail {

/// Walks `x` down from `top` until at_edge(x) differs from at_edge(top), then bisects.
template <typename AtEdge>
double find_edge_flip(AtEdge&& at_edge, double top, double bottom) {
  const bool start = at_edge(top);
  double upper = top;
  for (double x = top - kTransitionScanStep; x > bottom; x -= kTransitionScanStep) {
    if (at_edge(x) != start) {
      const auto br = search::bisect(at_edge, x, upper, kTransitionResolution);
      return 0.5 * (br.first + br.second);
    }
    upper = x;
  }
  throw Error(ErrorCode::NoTransition, "red dot never moves to the quadrant edge");
}

inline bool separability_dot_at_edge(double a, double b, ProtocolKind protocol) {
  try {
    return red_dot(a, b, BoundaryKind::Separability, protocol).at_edge;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyBoundary) return true;
    throw;
  }
}

}  // namespace detail

/// Value of b below which the separability red dot sits at a quadrant edge (a fixed).
inline double find_transition_b(double a, ProtocolKind protocol) {
  if (!(a > 1.0) || !std::isfinite(a)) throw Error(ErrorCode::DomainError, "requires a > 1");
  return detail::find_edge_flip(
      [&](double b) { return detail::separability_dot_at_edge(a, b, protocol); }, a, 1.0);
}

/// Value of a below which the separability red dot sits at a quadrant edge (b fixed).
inline double find_transition_a(double b, ProtocolKind protocol) {
  if (!(b > 1.0) || !std::isfinite(b)) throw Error(ErrorCode::DomainError, "requires b > 1");
  return detail::find_edge_flip(
      [&](double a) { return detail::separability_dot_at_edge(a, b, protocol); }, b, 1.0);
}

inline constexpr std::size_t kGapScanPoints = 401;
inline constexpr double kSteerVanishResolution = 1e-5;

/// Largest steering_gap over the quadrant; -inf when no c1 admits both curves.
inline double max_steering_gap(double a, double b) {
  const double edge = detail::quadrant_edge(a, b);
  return search::scan_then_refine_max([&](double c1) { return steering_gap(a, b, c1); }, -edge, 0.0,
                                      kGapScanPoints, 1e-12)
      .value;
}

inline bool has_steerable_states(double a, double b) { return max_steering_gap(a, b) > 0.0; }

/// Value of b at which the Bob -> Alice steerable region of the quadrant vanishes.
inline double find_steer_vanish_b(double a) {
  if (!(a > 1.0) || !std::isfinite(a)) throw Error(ErrorCode::DomainError, "requires a > 1");
  auto nonempty = [&](double b) { return has_steerable_states(a, b); };
  const double bottom = 1.0 + 1e-9;
  if (!nonempty(a) || nonempty(bottom))
    throw Error(ErrorCode::NumericalFailure, "steerable region does not vanish inside (1, a]");
  const auto br = search::bisect(nonempty, bottom, a, kSteerVanishResolution);
  return 0.5 * (br.first + br.second);
}

}  // namespace cvwork
