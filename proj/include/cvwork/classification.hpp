#pragma once

// Physicality, separability and Gaussian steerability of two-mode covariance
// matrices, plus the closed-form class boundaries in the c1 <= 0, c2 >= 0 quadrant.

#include <cmath>
#include <optional>
#include <random>

#include "cvwork/error.hpp"
#include "cvwork/gaussian.hpp"
#include "cvwork/search.hpp"

namespace cvwork {

struct ClassRecord {
  bool physical = false;
  bool separable = false;
  bool steerable_b_to_a = false;
  bool steerable_a_to_b = false;

  friend bool operator==(const ClassRecord&, const ClassRecord&) = default;
};

enum class BoundaryKind { Physicality, Separability, NonsteerabilityBtoA };

// Smallest eigenvalue of each criterion matrix. A criterion holds when its
// margin is >= -kPsdTolerance. These are defined for any symmetric input.
inline double physicality_margin(const Mat4& cov) {
  return min_hermitian_eigenvalue(uncertainty_matrix(cov));
}
inline double ppt_margin(const Mat4& cov) {
  return min_hermitian_eigenvalue(uncertainty_matrix(partial_transpose(cov)));
}
inline double nonsteer_margin_b_to_a(const Mat4& cov) {
  return min_hermitian_eigenvalue(uncertainty_matrix(cov, true, false));
}
inline double nonsteer_margin_a_to_b(const Mat4& cov) {
  return min_hermitian_eigenvalue(uncertainty_matrix(cov, false, true));
}

namespace detail {

inline void require_physical(const Mat4& cov) {
  if (!is_physical(cov)) throw Error(ErrorCode::NotPhysical, "covariance violates the uncertainty relation");
}

inline void check_quadrant_args(double a, double b, double c1) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c1) || a <= 0.0 || b <= 0.0)
    throw Error(ErrorCode::DomainError, "a and b must be positive and finite");
  if (c1 > 0.0) throw Error(ErrorCode::DomainError, "boundaries are defined for c1 <= 0");
  if (c1 * c1 >= a * b) throw Error(ErrorCode::DomainError, "requires c1^2 < ab");
}

}  // namespace detail

inline bool is_separable(const Mat4& cov) {
  detail::require_physical(cov);
  return ppt_margin(cov) >= -kPsdTolerance;
}

inline bool is_steerable_b_to_a(const Mat4& cov) {
  detail::require_physical(cov);
  return nonsteer_margin_b_to_a(cov) < -kPsdTolerance;
}

inline bool is_steerable_a_to_b(const Mat4& cov) {
  detail::require_physical(cov);
  return nonsteer_margin_a_to_b(cov) < -kPsdTolerance;
}

/// Flags are evaluated physical -> separable -> steering. A nonphysical matrix
/// gets all flags false; a separable one is never reported steerable.
inline ClassRecord classify(const Mat4& cov) {
  ClassRecord r;
  if (!is_physical(cov)) return r;
  r.physical = true;
  r.separable = ppt_margin(cov) >= -kPsdTolerance;
  if (r.separable) return r;
  r.steerable_b_to_a = nonsteer_margin_b_to_a(cov) < -kPsdTolerance;
  r.steerable_a_to_b = nonsteer_margin_a_to_b(cov) < -kPsdTolerance;
  return r;
}

inline ClassRecord classify(const StandardFormParams& p) { return classify(standard_form_cov(p)); }

/// Upper root of the PPT saturation condition at fixed (a, b, c1):
///   c2 = c1/(ab - c1^2) + sqrt(ab + ab/(c1^2 - ab)^2 + (a^2 + b^2)/(c1^2 - ab)).
/// The result may be negative, meaning no separable state has c2 >= 0.
inline double boundary_c2_separable(double a, double b, double c1) {
  detail::check_quadrant_args(a, b, c1);
  const double ab = a * b;
  const double d = c1 * c1 - ab;  // < 0
  const double radicand = ab + ab / (d * d) + (a * a + b * b) / d;
  if (radicand < 0.0) throw Error(ErrorCode::DomainError, "no real separability boundary");
  return -c1 / d + std::sqrt(radicand);
}

/// Supremum c2 for Bob -> Alice nonsteerability: c2 = sqrt(b (a + b/(c1^2 - ab))).
inline double boundary_c2_nonsteer(double a, double b, double c1) {
  detail::check_quadrant_args(a, b, c1);
  const double radicand = b * (a + b / (c1 * c1 - a * b));
  if (!(radicand > 0.0))
    throw Error(ErrorCode::DomainError, "no nonsteerable/steerable boundary at this c1");
  return std::sqrt(radicand);
}

struct C2Interval {
  double lo;
  double hi;
};

namespace detail {

/// A c2 at which (a, b, c1, c2) is physical, if any. Tries the vertex of the
/// detGamma - Delta + 1 parabola first, then maximises the smallest eigenvalue
/// of Gamma + i Omega, which is concave in c2.
inline std::optional<double> physical_anchor(double a, double b, double c1) {
  const double ab = a * b;
  auto margin = [&](double c2) { return physicality_margin(standard_form_cov({a, b, c1, c2})); };
  const double vertex = -c1 / (ab - c1 * c1);
  if (std::isfinite(vertex) && margin(vertex) >= -kPsdTolerance) return vertex;
  const double edge = std::sqrt(ab);
  const auto peak = search::golden_section_max(margin, -edge, edge, 1e-10);
  if (peak.value < -kPsdTolerance) return std::nullopt;
  return peak.x;
}

inline bool physical_at(double a, double b, double c1, double c2) {
  return physicality_margin(standard_form_cov({a, b, c1, c2})) >= -kPsdTolerance;
}

inline double physical_upper(double a, double b, double c1, double anchor) {
  const double edge = std::sqrt(a * b);
  auto physical = [&](double c2) { return physical_at(a, b, c1, c2); };
  return physical(edge) ? edge : search::bisect(physical, anchor, edge, 1e-11).first;
}

inline double physical_lower(double a, double b, double c1, double anchor) {
  const double edge = std::sqrt(a * b);
  auto physical = [&](double c2) { return physical_at(a, b, c1, c2); };
  return physical(-edge) ? -edge : search::bisect(physical, -edge, anchor, 1e-11).second;
}

}  // namespace detail

/// The set of c2 for which (a, b, c1, c2) is physical. It is an interval because
/// the smallest eigenvalue of Gamma + i Omega is concave in c2; both ends are
/// found by bisection on the uncertainty relation.
inline std::optional<C2Interval> physical_c2_interval(double a, double b, double c1) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c1) || a <= 0.0 || b <= 0.0)
    throw Error(ErrorCode::DomainError, "a and b must be positive and finite");
  if (c1 * c1 >= a * b) return std::nullopt;
  const auto anchor = detail::physical_anchor(a, b, c1);
  if (!anchor) return std::nullopt;
  return C2Interval{detail::physical_lower(a, b, c1, *anchor), detail::physical_upper(a, b, c1, *anchor)};
}

/// Largest physical c2 at fixed (a, b, c1), or nullopt when no c2 is physical.
inline std::optional<double> physical_c2_max(double a, double b, double c1) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c1) || a <= 0.0 || b <= 0.0)
    throw Error(ErrorCode::DomainError, "a and b must be positive and finite");
  if (c1 * c1 >= a * b) return std::nullopt;
  const auto anchor = detail::physical_anchor(a, b, c1);
  if (!anchor) return std::nullopt;
  return detail::physical_upper(a, b, c1, *anchor);
}

/// Largest c2 >= 0 at which (a, b, c1, c2) is physical.
inline double boundary_c2_physical(double a, double b, double c1) {
  detail::check_quadrant_args(a, b, c1);
  const auto hi = physical_c2_max(a, b, c1);
  if (!hi || *hi < 0.0) throw Error(ErrorCode::DomainError, "no physical state with c2 >= 0 at this c1");
  return *hi;
}

inline double boundary_c2(BoundaryKind kind, double a, double b, double c1) {
  switch (kind) {
    case BoundaryKind::Physicality: return boundary_c2_physical(a, b, c1);
    case BoundaryKind::Separability: return boundary_c2_separable(a, b, c1);
    case BoundaryKind::NonsteerabilityBtoA: return boundary_c2_nonsteer(a, b, c1);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown boundary kind");
}

/// Draws a, b uniformly from [lo, hi], then c1 uniformly from (-sqrt(ab), sqrt(ab))
/// and c2 uniformly from the physical interval at that c1. Only c1 is redrawn
/// when its physical interval is empty.
template <typename Urbg>
StandardFormParams random_physical_params(Urbg& rng, double lo = 1.0, double hi = 10.0) {
  std::uniform_real_distribution<double> ab_dist(lo, hi);
  const double a = ab_dist(rng);
  const double b = ab_dist(rng);
  const double edge = std::sqrt(a * b);
  std::uniform_real_distribution<double> c1_dist(-edge, edge);
  for (;;) {
    const double c1 = c1_dist(rng);
    const auto interval = physical_c2_interval(a, b, c1);
    if (!interval) continue;
    std::uniform_real_distribution<double> c2_dist(interval->lo, interval->hi);
    const StandardFormParams p{a, b, c1, c2_dist(rng)};
    if (is_physical(standard_form_cov(p))) return p;
  }
}

}  // namespace cvwork
