#pragma once

// Sampling oracle. Gaussian states have a positive Wigner function, so the
// quadratures can be drawn classically from N(mean, Gamma / 2).
//
// Streams: samples are produced in fixed chunks of kChunkSize rows. Chunk k is
// drawn from std::mt19937_64 seeded with derive_seed(seed, k), so a batch is
// identical for any number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cvwork/error.hpp"
#include "cvwork/gaussian.hpp"
#include "cvwork/parallel.hpp"
#include "cvwork/protocols.hpp"

namespace cvwork::mc {

inline constexpr std::size_t kChunkSize = 4096;
inline constexpr std::size_t kMinRegressionSamples = 100;

/// SplitMix64 finaliser applied to (seed, stream index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using RowMatrix4 = Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor>;
using RowMatrix2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

struct SampleBatch {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  RowMatrix4 points;         // (x_A, p_A, x_B, p_B) per row
  RowMatrix2 outcome_noise;  // standard normal pairs, scaled per measurement
};

inline SampleBatch sample_state(const TwoModeState& state, std::size_t n, std::uint64_t seed,
                                unsigned workers = 0) {
  if (n < 1) throw Error(ErrorCode::InsufficientSamples, "need at least one sample");
  if (!is_physical(state.cov()))
    throw Error(ErrorCode::NotPhysical, "cannot sample a nonphysical covariance");
  Eigen::LLT<Mat4> llt(0.5 * state.cov());
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotPositiveDefinite, "Gamma/2 has no Cholesky factor");
  const Mat4 factor = llt.matrixL();
  const Vec4 mean = state.mean();

  SampleBatch batch;
  batch.n = n;
  batch.seed = seed;
  batch.points.resize(static_cast<Eigen::Index>(n), 4);
  batch.outcome_noise.resize(static_cast<Eigen::Index>(n), 2);
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  parallel::for_each_task(chunks, workers, [&](std::size_t k) {
    std::mt19937_64 rng(derive_seed(seed, k));
    std::normal_distribution<double> normal;
    const std::size_t end = std::min(n, (k + 1) * kChunkSize);
    for (std::size_t i = k * kChunkSize; i < end; ++i) {
      Vec4 z;
      for (int j = 0; j < 4; ++j) z(j) = normal(rng);
      const auto row = static_cast<Eigen::Index>(i);
      batch.points.row(row) = (mean + factor * z).transpose();
      batch.outcome_noise(row, 0) = normal(rng);
      batch.outcome_noise(row, 1) = normal(rng);
    }
  });
  return batch;
}

/// Simulated outcomes of `meas`: the measured mode's quadratures plus noise of
/// covariance Gamma_m / 2. For homodyne the unmeasured column is NaN.
inline RowMatrix2 outcomes(const SampleBatch& batch, const MeasurementSpec& meas) {
  const int off = meas.mode() == Mode::A ? 0 : 2;
  RowMatrix2 out(static_cast<Eigen::Index>(batch.n), 2);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (meas.is_x_homodyne()) {
    out.col(0) = batch.points.col(off);
    out.col(1).setConstant(nan);
  } else if (meas.is_p_homodyne()) {
    out.col(0).setConstant(nan);
    out.col(1) = batch.points.col(off + 1);
  } else {
    const double sx = std::sqrt(0.5 * meas.lambda());
    const double sp = std::sqrt(0.5 / meas.lambda());
    out.col(0) = batch.points.col(off) + sx * batch.outcome_noise.col(0);
    out.col(1) = batch.points.col(off + 1) + sp * batch.outcome_noise.col(1);
  }
  return out;
}

/// OLS fit of the unmeasured mode's quadratures on the outcome components.
/// slope(i, j) is the coefficient of outcome component j for quadrature i;
/// columns of unmeasured components are zero with infinite standard error.
/// conditional_cov is the residual covariance, which estimates Gamma'/2.
struct MomentEstimate {
  Mat2 slope = Mat2::Zero();
  Mat2 slope_stderr = Mat2::Zero();
  Mat2 conditional_cov = Mat2::Zero();
  Mat2 conditional_cov_stderr = Mat2::Zero();
};

inline MomentEstimate estimate_conditional(const SampleBatch& batch, const MeasurementSpec& meas) {
  if (batch.n < kMinRegressionSamples)
    throw Error(ErrorCode::InsufficientSamples, "regression needs at least 100 samples");
  const RowMatrix2 y_all = outcomes(batch, meas);
  std::vector<int> used;
  if (!meas.is_p_homodyne()) used.push_back(0);
  if (!meas.is_x_homodyne()) used.push_back(1);
  const int k = static_cast<int>(used.size());
  const int kept_off = meas.mode() == Mode::A ? 2 : 0;

  const auto n = static_cast<Eigen::Index>(batch.n);
  Eigen::MatrixXd y(n, k);
  for (int j = 0; j < k; ++j) y.col(j) = y_all.col(used[static_cast<std::size_t>(j)]);
  Eigen::MatrixXd x(n, 2);
  x = batch.points.middleCols(kept_off, 2);

  const Eigen::RowVectorXd y_mean = y.colwise().mean();
  const Eigen::RowVector2d x_mean = x.colwise().mean();
  y.rowwise() -= y_mean;
  x.rowwise() -= x_mean;
  const Eigen::MatrixXd syy = y.transpose() * y;
  const Eigen::MatrixXd sxy = x.transpose() * y;
  const Mat2 sxx = x.transpose() * x;
  const Eigen::MatrixXd syy_inv = syy.inverse();
  const Eigen::MatrixXd beta = sxy * syy_inv;  // 2 x k
  const double dof = static_cast<double>(batch.n) - static_cast<double>(k) - 1.0;
  Mat2 resid = (sxx - beta * sxy.transpose()) / dof;
  resid = (0.5 * (resid + resid.transpose())).eval();

  MomentEstimate est;
  est.slope_stderr.setConstant(std::numeric_limits<double>::infinity());
  for (int j = 0; j < k; ++j) {
    const int col = used[static_cast<std::size_t>(j)];
    for (int i = 0; i < 2; ++i) {
      est.slope(i, col) = beta(i, j);
      est.slope_stderr(i, col) = std::sqrt(resid(i, i) * syy_inv(j, j));
    }
  }
  est.conditional_cov = resid;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      est.conditional_cov_stderr(i, j) =
          std::sqrt((resid(i, i) * resid(j, j) + resid(i, j) * resid(i, j)) / dof);
  return est;
}

struct WorkEstimate {
  double mean_work;
  double standard_error;
  /// Largest per-shot sample variance among the strata (one stratum except
  /// for HomodyneAverage, which runs X on even shots and P on odd shots).
  double per_shot_variance;
};

namespace detail {

struct RunningMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stderr_of_mean() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

}  // namespace detail

/// Applies the protocol shot by shot to simulated outcomes and averages the work.
inline WorkEstimate mc_work(const StandardFormParams& params, ProtocolKind kind, std::size_t n,
                            std::uint64_t seed, unsigned workers = 0) {
  if (!is_physical(standard_form_cov(params)))
    throw Error(ErrorCode::NotPhysical, "parameters do not describe a physical state");
  const bool averaged = kind == ProtocolKind::HomodyneAverage;
  if (n < (averaged ? 2u : 1u)) throw Error(ErrorCode::InsufficientSamples, "too few shots");
  const SampleBatch batch = sample_state(standard_form_state(params), n, seed, workers);
  const RowMatrix2 het = outcomes(batch, MeasurementSpec::heterodyne());

  detail::RunningMoments strata[2];
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    ProtocolKind shot = kind;
    if (averaged) shot = (i % 2 == 0) ? ProtocolKind::HomodyneX : ProtocolKind::HomodyneP;
    const Vec2 outcome = shot == ProtocolKind::Heterodyne
                             ? Vec2(het(row, 0), het(row, 1))
                             : Vec2(batch.points(row, 2), batch.points(row, 3));
    strata[averaged && shot == ProtocolKind::HomodyneP ? 1 : 0].add(run_protocol(params, shot, outcome).work);
  }
  if (!averaged)
    return {strata[0].mean, strata[0].stderr_of_mean(), strata[0].variance()};
  const double se = 0.5 * std::hypot(strata[0].stderr_of_mean(), strata[1].stderr_of_mean());
  return {0.5 * (strata[0].mean + strata[1].mean), se,
          std::max(strata[0].variance(), strata[1].variance())};
}

}  // namespace cvwork::mc
