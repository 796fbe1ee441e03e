#pragma once

// Covariance-matrix algebra for one- and two-mode Gaussian states.
//
// Convention: Gamma_ij = <dR_i dR_j + dR_j dR_i> with R = (x_A, p_A, x_B, p_B),
// x = (a + a^dag)/sqrt(2), [x, p] = i. The vacuum has Gamma = identity and the
// Wigner-function covariance of the quadratures is Gamma / 2.

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "cvwork/error.hpp"

namespace cvwork {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using CMat4 = Eigen::Matrix4cd;

/// Matrix inequalities M >= 0 are accepted when the smallest eigenvalue is >= -kPsdTolerance.
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kSymmetryTolerance = 1e-12;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// The four reals of the two-mode standard form
///   [[a, 0, c1, 0], [0, a, 0, c2], [c1, 0, b, 0], [0, c2, 0, b]].
struct StandardFormParams {
  double a = 1.0;
  double b = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;

  friend bool operator==(const StandardFormParams&, const StandardFormParams&) = default;
};

enum class Mode { A, B };

constexpr Mode other(Mode m) noexcept { return m == Mode::A ? Mode::B : Mode::A; }

namespace detail {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, double tol = kSymmetryTolerance) {
  const double scale = std::max(1.0, max_abs(m));
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

inline int block_offset(Mode m) noexcept { return m == Mode::A ? 0 : 2; }

}  // namespace detail

/// Mean vector and covariance of a two-mode Gaussian state. The covariance is
/// checked for symmetry on construction and stored exactly symmetric.
class TwoModeState {
 public:
  TwoModeState() : mean_(Vec4::Zero()), cov_(Mat4::Identity()) {}

  TwoModeState(const Vec4& mean, const Mat4& cov) : mean_(mean) {
    if (!cov.allFinite() || !mean.allFinite())
      throw Error(ErrorCode::InvalidArgument, "state contains non-finite entries");
    if (!detail::is_symmetric(cov))
      throw Error(ErrorCode::NonSymmetricInput, "covariance matrix is not symmetric");
    cov_ = 0.5 * (cov + cov.transpose());
  }

  const Vec4& mean() const noexcept { return mean_; }
  const Mat4& cov() const noexcept { return cov_; }

  Vec2 local_mean(Mode m) const { return mean_.segment<2>(detail::block_offset(m)); }
  Mat2 local_cov(Mode m) const {
    const int o = detail::block_offset(m);
    return cov_.block<2, 2>(o, o);
  }
  /// Cross block with rows indexing `rows` and columns indexing the other mode.
  Mat2 cross_cov(Mode rows) const {
    return cov_.block<2, 2>(detail::block_offset(rows), detail::block_offset(other(rows)));
  }
  /// The C block of the standard form (rows A, columns B).
  Mat2 correlation() const { return cross_cov(Mode::A); }

 private:
  Vec4 mean_;
  Mat4 cov_;
};

struct SingleModeState {
  Vec2 mean = Vec2::Zero();
  Mat2 cov = Mat2::Identity();

  bool is_physical() const {
    return detail::is_symmetric(cov) && cov.trace() > 0.0 &&
           cov.determinant() >= 1.0 - kPsdTolerance;
  }
};

/// Gaussian measurement with covariance diag(lambda, 1/lambda) on one mode.
/// lambda = 0 is x-homodyne, lambda = inf is p-homodyne, lambda = 1 is heterodyne.
class MeasurementSpec {
 public:
  MeasurementSpec() = default;
  MeasurementSpec(Mode mode, double lambda) : mode_(mode), lambda_(lambda) {
    if (std::isnan(lambda) || lambda < 0.0)
      throw Error(ErrorCode::DomainError, "measurement lambda must lie in [0, inf]");
  }

  static MeasurementSpec x_homodyne(Mode m = Mode::B) { return {m, 0.0}; }
  static MeasurementSpec p_homodyne(Mode m = Mode::B) { return {m, kInfinity}; }
  static MeasurementSpec heterodyne(Mode m = Mode::B) { return {m, 1.0}; }

  Mode mode() const noexcept { return mode_; }
  double lambda() const noexcept { return lambda_; }
  bool is_x_homodyne() const noexcept { return lambda_ == 0.0; }
  bool is_p_homodyne() const noexcept { return std::isinf(lambda_); }
  bool is_homodyne() const noexcept { return is_x_homodyne() || is_p_homodyne(); }

  /// Covariance of the measurement; only defined for finite, nonzero lambda.
  Mat2 covariance() const {
    if (is_homodyne())
      throw Error(ErrorCode::DomainError, "homodyne measurement covariance is singular");
    return Vec2(lambda_, 1.0 / lambda_).asDiagonal();
  }

 private:
  Mode mode_ = Mode::B;
  double lambda_ = 0.0;
};

/// Omega = direct sum of [[0, 1], [-1, 0]] over `Modes` modes.
template <int Modes>
Eigen::Matrix<double, 2 * Modes, 2 * Modes> symplectic_form() {
  Eigen::Matrix<double, 2 * Modes, 2 * Modes> omega;
  omega.setZero();
  for (int i = 0; i < Modes; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  return omega;
}

/// Gamma + i (Omega_A (+) Omega_B), with either symplectic block switchable off.
/// With both on this is the uncertainty matrix; dropping one gives the steering tests.
inline CMat4 uncertainty_matrix(const Mat4& cov, bool omega_a = true, bool omega_b = true) {
  Mat4 omega = Mat4::Zero();
  const Mat2 w = symplectic_form<1>();
  if (omega_a) omega.block<2, 2>(0, 0) = w;
  if (omega_b) omega.block<2, 2>(2, 2) = w;
  CMat4 m;
  m.real() = cov;
  m.imag() = omega;
  return m;
}

template <int N>
double min_hermitian_eigenvalue(const Eigen::Matrix<std::complex<double>, N, N>& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!m.allFinite() || (m - m.adjoint()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
    throw Error(ErrorCode::NonHermitianInput, "matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<std::complex<double>, N, N>> solver(
      m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalFailure, "Hermitian eigensolver did not converge");
  return solver.eigenvalues()(0);
}

inline bool is_psd(const CMat4& m) { return min_hermitian_eigenvalue(m) >= -kPsdTolerance; }

struct SymplecticSpectrum {
  double nu_minus;
  double nu_plus;
};

/// Symplectic eigenvalues from the two-mode invariants detGamma and
/// Delta = det A + det B + 2 det C.
inline SymplecticSpectrum symplectic_eigenvalues(const Mat4& cov) {
  if (!detail::is_symmetric(cov))
    throw Error(ErrorCode::NonSymmetricInput, "covariance matrix is not symmetric");
  Eigen::LLT<Mat4> llt(cov);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotPositiveDefinite, "covariance matrix is not positive definite");
  const double det = cov.determinant();
  const double delta = cov.block<2, 2>(0, 0).determinant() + cov.block<2, 2>(2, 2).determinant() +
                       2.0 * cov.block<2, 2>(0, 2).determinant();
  const double disc = std::max(0.0, delta * delta - 4.0 * det);
  const double root = std::sqrt(disc);
  const double minus = std::max(0.0, 0.5 * (delta - root));
  return {std::sqrt(minus), std::sqrt(0.5 * (delta + root))};
}

/// Lambda Gamma Lambda^T with Lambda = diag(1, 1, 1, -1): flips the sign of p_B.
inline Mat4 partial_transpose(const Mat4& cov) {
  Mat4 out = cov;
  out.row(3) *= -1.0;
  out.col(3) *= -1.0;
  return out;
}

inline bool is_physical(const Mat4& cov) {
  if (!cov.allFinite()) return false;
  return is_psd(uncertainty_matrix(cov));
}

inline Mat4 standard_form_cov(const StandardFormParams& p) {
  Mat4 cov;
  // clang-format off
  cov << p.a,  0.0,  p.c1, 0.0,
         0.0,  p.a,  0.0,  p.c2,
         p.c1, 0.0,  p.b,  0.0,
         0.0,  p.c2, 0.0,  p.b;
  // clang-format on
  return cov;
}

/// Zero-mean state with the standard-form covariance. Nonphysical parameters are allowed.
inline TwoModeState standard_form_state(const StandardFormParams& p) {
  return TwoModeState(Vec4::Zero(), standard_form_cov(p));
}

inline SingleModeState reduced_state(const TwoModeState& state, Mode m) {
  return {state.local_mean(m), state.local_cov(m)};
}

/// State of the unmeasured mode after `meas` yields `outcome` on the other mode:
///   mean -> mean_k + C (Gamma_m + Gamma_meas)^-1 (outcome - mean_m)
///   cov  -> Gamma_k - C (Gamma_m + Gamma_meas)^-1 C^T
/// Homodyne limits use the projector form with a pseudo-inverse on the measured
/// quadrature. The covariance never depends on `outcome`.
inline SingleModeState conditional_update(const TwoModeState& state, const MeasurementSpec& meas,
                                          const Vec2& outcome) {
  const Mode measured = meas.mode();
  const Mode kept = other(measured);
  const Vec2 kept_mean = state.local_mean(kept);
  const Vec2 meas_mean = state.local_mean(measured);
  const Mat2 kept_cov = state.local_cov(kept);
  const Mat2 meas_cov = state.local_cov(measured);
  const Mat2 cross = state.cross_cov(kept);

  SingleModeState out;
  if (meas.is_homodyne()) {
    const int q = meas.is_x_homodyne() ? 0 : 1;
    const double var = meas_cov(q, q);
    if (!(var > 0.0))
      throw Error(ErrorCode::SingularConditioning, "measured quadrature has zero variance");
    const Vec2 gain = cross.col(q) / var;
    out.mean = kept_mean + gain * (outcome(q) - meas_mean(q));
    out.cov = kept_cov - gain * cross.col(q).transpose();
  } else {
    const Mat2 total = meas_cov + meas.covariance();
    const double det = total.determinant();
    if (!std::isfinite(det) || std::abs(det) <= 1e-14 * std::max(1.0, total.squaredNorm()))
      throw Error(ErrorCode::SingularConditioning, "Gamma_B + Gamma_m is singular");
    const Mat2 gain = cross * total.inverse();
    out.mean = kept_mean + gain * (outcome - meas_mean);
    out.cov = kept_cov - gain * cross.transpose();
  }
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

/// <a^dag a> + 1/2 = (|mean|^2 + tr(cov)/2) / 2.
inline double local_energy(const SingleModeState& s) {
  return 0.5 * (s.mean.squaredNorm() + 0.5 * s.cov.trace());
}

}  // namespace cvwork
