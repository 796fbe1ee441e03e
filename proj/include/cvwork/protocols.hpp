#pragma once

// Work extraction at Alice's mode conditioned on a Gaussian measurement by Bob:
// (i) Bob measures and reports the outcome, (ii) Alice removes the induced
// displacement, (iii) Alice squeezes to balance her variances. The work is the
// drop in Alice's local energy.

#include <cmath>
#include <limits>
#include <string_view>

#include "cvwork/error.hpp"
#include "cvwork/gaussian.hpp"

namespace cvwork {

enum class ProtocolKind { HomodyneX, HomodyneP, HomodyneAverage, Heterodyne };

constexpr std::string_view to_string(ProtocolKind k) noexcept {
  switch (k) {
    case ProtocolKind::HomodyneX: return "homx";
    case ProtocolKind::HomodyneP: return "homp";
    case ProtocolKind::HomodyneAverage: return "hom";
    case ProtocolKind::Heterodyne: return "het";
  }
  return "?";
}

/// Which quadrature the squeezer S scales by s: X means S = diag(s, 1/s),
/// P means S = diag(1/s, s).
enum class SqueezeAxis { X, P };

struct SqueezeResult {
  double s;
  Mat2 final_cov;
};

/// Local squeezing S Gamma S^T minimising the trace of a diagonal covariance.
/// The optimum equalises both variances at sqrt(gamma1 gamma2).
inline SqueezeResult optimal_squeeze(const Mat2& cov, SqueezeAxis axis) {
  if (cov(0, 1) != 0.0 || cov(1, 0) != 0.0)
    throw Error(ErrorCode::NonDiagonalInput, "squeezing expects a diagonal covariance");
  const double g1 = cov(0, 0);
  const double g2 = cov(1, 1);
  if (!(g1 > 0.0) || !(g2 > 0.0) || !std::isfinite(g1) || !std::isfinite(g2))
    throw Error(ErrorCode::NonPositiveVariance, "variances must be positive");
  const double s = axis == SqueezeAxis::X ? std::sqrt(std::sqrt(g2 / g1)) : std::sqrt(std::sqrt(g1 / g2));
  const Vec2 diag = axis == SqueezeAxis::X ? Vec2(s, 1.0 / s) : Vec2(1.0 / s, s);
  const Mat2 squeezer = diag.asDiagonal();
  Mat2 out = squeezer * cov * squeezer.transpose();
  out(0, 1) = out(1, 0) = 0.0;
  return {s, out};
}

struct Trajectory {
  Vec2 outcome;
  SingleModeState post_measurement;
  SingleModeState post_displacement;
  double squeeze_s;
  SingleModeState final_state;
  double initial_energy;
  double final_energy;
  double work;
};

struct WorkReport {
  double w_hom;
  double w_het;
  double w_x;
  double w_p;
};

namespace detail {

inline void require_physical(const StandardFormParams& p) {
  if (!is_physical(standard_form_cov(p)))
    throw Error(ErrorCode::NotPhysical, "parameters do not describe a physical state");
}

inline MeasurementSpec protocol_measurement(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::HomodyneX: return MeasurementSpec::x_homodyne();
    case ProtocolKind::HomodyneP: return MeasurementSpec::p_homodyne();
    case ProtocolKind::Heterodyne: return MeasurementSpec::heterodyne();
    case ProtocolKind::HomodyneAverage: break;
  }
  throw Error(ErrorCode::InvalidArgument, "HomodyneAverage has no single trajectory");
}

inline void require_conditioning(const StandardFormParams& p, ProtocolKind kind) {
  const double ab = p.a * p.b;
  const double ab1 = p.a * (p.b + 1.0);
  bool ok = true;
  switch (kind) {
    case ProtocolKind::HomodyneX: ok = p.c1 * p.c1 < ab; break;
    case ProtocolKind::HomodyneP: ok = p.c2 * p.c2 < ab; break;
    case ProtocolKind::Heterodyne: ok = p.c1 * p.c1 < ab1 && p.c2 * p.c2 < ab1; break;
    case ProtocolKind::HomodyneAverage: ok = p.c1 * p.c1 < ab && p.c2 * p.c2 < ab; break;
  }
  if (!ok) throw Error(ErrorCode::DegenerateConditioning, "conditional variance is not positive");
}

}  // namespace detail

/// Runs one shot of the X-homodyne, P-homodyne or heterodyne protocol on the
/// zero-mean standard-form state. For homodyne only the measured component of
/// `outcome` is used.
inline Trajectory run_protocol(const StandardFormParams& p, ProtocolKind kind, const Vec2& outcome) {
  const MeasurementSpec meas = detail::protocol_measurement(kind);
  detail::require_physical(p);
  detail::require_conditioning(p, kind);

  const TwoModeState state = standard_form_state(p);
  Trajectory t;
  t.outcome = outcome;
  t.initial_energy = local_energy(reduced_state(state, Mode::A));
  t.post_measurement = conditional_update(state, meas, outcome);
  // Displacing by minus the conditional mean leaves Alice centred.
  t.post_displacement = {Vec2::Zero(), t.post_measurement.cov};
  const auto squeeze = optimal_squeeze(t.post_displacement.cov,
                                       kind == ProtocolKind::HomodyneX ? SqueezeAxis::X : SqueezeAxis::P);
  t.squeeze_s = squeeze.s;
  t.final_state = {Vec2::Zero(), squeeze.final_cov};
  t.final_energy = local_energy(t.final_state);
  t.work = t.initial_energy - t.final_energy;
  return t;
}

/// Closed-form work without the physicality check. Returns NaN outside the
/// formula's domain; intended for scans along boundary curves.
inline double work_formula(const StandardFormParams& p, ProtocolKind kind) noexcept {
  const double ab = p.a * p.b;
  const double ab1 = p.a * (p.b + 1.0);
  switch (kind) {
    case ProtocolKind::HomodyneX: return 0.5 * p.a - 0.5 * p.a * std::sqrt(1.0 - p.c1 * p.c1 / ab);
    case ProtocolKind::HomodyneP: return 0.5 * p.a - 0.5 * p.a * std::sqrt(1.0 - p.c2 * p.c2 / ab);
    case ProtocolKind::HomodyneAverage:
      // W_hom = a/2 - (a/4)(sqrt(1 - c1^2/ab) + sqrt(1 - c2^2/ab))
      return 0.5 * p.a - 0.25 * p.a * (std::sqrt(1.0 - p.c1 * p.c1 / ab) + std::sqrt(1.0 - p.c2 * p.c2 / ab));
    case ProtocolKind::Heterodyne:
      // W_het = a/2 - (a/2) sqrt(1 - c1^2/(a(b+1))) sqrt(1 - c2^2/(a(b+1)))
      return 0.5 * p.a - 0.5 * p.a * std::sqrt(1.0 - p.c1 * p.c1 / ab1) * std::sqrt(1.0 - p.c2 * p.c2 / ab1);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

inline double work(const StandardFormParams& p, ProtocolKind kind) {
  detail::require_physical(p);
  return work_formula(p, kind);
}

inline double work_x(const StandardFormParams& p) { return work(p, ProtocolKind::HomodyneX); }
inline double work_p(const StandardFormParams& p) { return work(p, ProtocolKind::HomodyneP); }
inline double work_hom(const StandardFormParams& p) { return work(p, ProtocolKind::HomodyneAverage); }
inline double work_het(const StandardFormParams& p) { return work(p, ProtocolKind::Heterodyne); }

inline WorkReport work_report(const StandardFormParams& p) {
  detail::require_physical(p);
  return {work_formula(p, ProtocolKind::HomodyneAverage), work_formula(p, ProtocolKind::Heterodyne),
          work_formula(p, ProtocolKind::HomodyneX), work_formula(p, ProtocolKind::HomodyneP)};
}

}  // namespace cvwork
