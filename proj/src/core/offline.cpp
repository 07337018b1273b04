// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/offline.hpp"

#include "smor/core/errors.hpp"
#include "smor/core/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace smor {

namespace {

// Vertex of the parabola through the extremum and its neighbours, in cells.
double refine_extremum(const Eigen::VectorXd& g, Eigen::Index i) {
  if (i <= 0 || i + 1 >= g.size()) return static_cast<double>(i);
  const double a = g(i - 1), b = g(i), c = g(i + 1);
  const double den = a - 2 * b + c;
  if (den == 0.0) return static_cast<double>(i);
  return static_cast<double>(i) + std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

}  // namespace

Eigen::Vector2d front_positions(const Eigen::VectorXd& temp, const SparseMatrix& d1, double dx) {
  require(temp.size() == d1.rows(), ErrorKind::Dimension, "temperature length differs from operator");
  const Eigen::VectorXd g = d1 * temp;
  Eigen::Index imin = 0;
  Eigen::Index imax = 0;
  const double gmin = g.minCoeff(&imin);
  const double gmax = g.maxCoeff(&imax);
  require(std::max(-gmin, gmax) >= 1e-8, ErrorKind::Tracking, "temperature profile is flat; no front to track");
  return {refine_extremum(g, imin) * dx, refine_extremum(g, imax) * dx};
}

PathTrajectory track_fronts(const Eigen::MatrixXd& temp_snapshots, const SparseMatrix& d1, double dx,
                            const std::vector<double>& times) {
  require(temp_snapshots.cols() == static_cast<Eigen::Index>(times.size()), ErrorKind::Dimension,
          "snapshot columns differ from time samples");
  require(temp_snapshots.cols() > 0, ErrorKind::InvalidInput, "no snapshots to track");
  PathTrajectory t;
  t.times = times;
  t.raw_paths.resize(2, temp_snapshots.cols());
  for (Eigen::Index j = 0; j < temp_snapshots.cols(); ++j)
    t.raw_paths.col(j) = front_positions(temp_snapshots.col(j), d1, dx);
  t.origin = t.raw_paths.col(0);
  t.raw_paths.colwise() -= t.origin;
  t.smooth_paths = t.raw_paths;
  return t;
}

void reanchor_paths(PathTrajectory& traj, const Eigen::VectorXd& x_ref) {
  require(x_ref.size() == traj.frames(), ErrorKind::Dimension, "reference length differs from frame count");
  const Eigen::VectorXd delta = traj.origin - x_ref;
  traj.raw_paths.colwise() += delta;
  if (traj.smooth_paths.size() > 0) traj.smooth_paths.colwise() += delta;
  traj.origin = x_ref;
}

PathTrajectory smooth_paths(const PathTrajectory& raw, const Smoothing& how) {
  const Eigen::Index s = raw.raw_paths.cols();
  require(s >= 2, ErrorKind::InvalidInput, "path smoothing needs at least two samples");
  require(static_cast<Eigen::Index>(raw.times.size()) == s, ErrorKind::Dimension, "path times differ from samples");
  PathTrajectory out = raw;
  Eigen::Index j0 = 0;
  if (how.mode == SmoothingMode::TailLinear) {
    require(how.fraction > 0 && how.fraction <= 1, ErrorKind::InvalidInput, "tail fraction must lie in (0, 1]");
    const double t0 = raw.times.front();
    const double t_junction = t0 + (1.0 - how.fraction) * (raw.times.back() - t0);
    while (j0 < s - 1 && raw.times[static_cast<std::size_t>(j0)] < t_junction - 1e-9) ++j0;
  }
  const double ta = raw.times[static_cast<std::size_t>(j0)];
  const double tb = raw.times.back();
  out.smooth_paths = raw.raw_paths;
  if (tb > ta) {
    for (Eigen::Index j = j0; j < s; ++j) {
      const double w = (raw.times[static_cast<std::size_t>(j)] - ta) / (tb - ta);
      out.smooth_paths.col(j) = (1 - w) * raw.raw_paths.col(j0) + w * raw.raw_paths.col(s - 1);
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> separate_waves(const Eigen::MatrixXd& snapshots, const Eigen::MatrixXd& paths,
                                            const ShiftOperator& op) {
  const Eigen::Index n_x = op.grid.n();
  require(snapshots.rows() == n_x, ErrorKind::Dimension, "snapshot rows differ from grid size");
  require(paths.rows() == 2 && paths.cols() == snapshots.cols(), ErrorKind::Dimension,
          "wave separation needs two paths aligned with the snapshots");
  const Eigen::Index half = n_x / 2;
  std::vector<Eigen::MatrixXd> out(2, Eigen::MatrixXd::Zero(n_x, snapshots.cols()));
  for (int f = 0; f < 2; ++f) {
    Eigen::MatrixXd masked = snapshots;
    if (f == kRightFrame)
      masked.topRows(half).setZero();
    else
      masked.bottomRows(n_x - half).setZero();
    for (Eigen::Index j = 0; j < snapshots.cols(); ++j) {
      const double p = paths(f, j);
      out[static_cast<std::size_t>(f)].col(j) = p == 0.0 ? Eigen::VectorXd(masked.col(j))
                                                           : shift_apply(op, Eigen::VectorXd(masked.col(j)), -p);
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd pod_modes(const Eigen::MatrixXd& data, Eigen::Index r) {
  if (r == 0) return Eigen::MatrixXd(data.rows(), 0);
  return pod(data, static_cast<std::size_t>(r)).modes;
}

}  // namespace

std::vector<TransformedFrame> build_frame_bases(const std::vector<Eigen::MatrixXd>& comoving_temp,
                                                const std::vector<Eigen::MatrixXd>& comoving_smf,
                                                const std::vector<Eigen::MatrixXd>& comoving_nonlin,
                                                const FrameModeCounts& counts, const ShiftOperator& op) {
  require(comoving_temp.size() == comoving_smf.size() && comoving_temp.size() == comoving_nonlin.size(),
          ErrorKind::Dimension, "co-moving data has inconsistent frame counts");
  std::vector<TransformedFrame> frames;
  for (std::size_t f = 0; f < comoving_temp.size(); ++f) {
    TransformedFrame fr;
    fr.shift_op = op;
    fr.temp_modes = pod_modes(comoving_temp[f], counts.temp);
    fr.smf_modes = pod_modes(comoving_smf[f], counts.smf);
    fr.nonlin_modes = pod_modes(comoving_nonlin[f], counts.nonlin);
    frames.push_back(std::move(fr));
  }
  return frames;
}

Eigen::MatrixXd extrapolate_coefficients(const std::vector<double>& fit_times, const Eigen::MatrixXd& coeffs,
                                         int degree, const std::vector<double>& target_times) {
  require(degree >= 0, ErrorKind::InvalidInput, "polynomial degree must be non-negative");
  require(coeffs.cols() == static_cast<Eigen::Index>(fit_times.size()), ErrorKind::Dimension,
          "coefficient columns differ from fit times");
  require(fit_times.size() >= static_cast<std::size_t>(degree) + 1, ErrorKind::InvalidInput,
          "too few points for the requested polynomial degree");
  const auto [lo, hi] = std::minmax_element(fit_times.begin(), fit_times.end());
  const double center = 0.5 * (*lo + *hi);
  const double scale = *hi > *lo ? 0.5 * (*hi - *lo) : 1.0;
  auto vandermonde = [&](const std::vector<double>& t) {
    Eigen::MatrixXd v(static_cast<Eigen::Index>(t.size()), degree + 1);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double x = (t[i] - center) / scale;
      double xp = 1.0;
      for (int d = 0; d <= degree; ++d, xp *= x) v(static_cast<Eigen::Index>(i), d) = xp;
    }
    return v;
  };
  const Eigen::MatrixXd v_fit = vandermonde(fit_times);
  const Eigen::MatrixXd poly = v_fit.colPivHouseholderQr().solve(coeffs.transpose());  // (d+1) x k
  return (vandermonde(target_times) * poly).transpose();
}

PodBasis residual_pod(const Eigen::MatrixXd& snapshots, const Eigen::MatrixXd& reconstruction, std::size_t r) {
  require(snapshots.rows() == reconstruction.rows() && snapshots.cols() == reconstruction.cols(),
          ErrorKind::Dimension, "snapshots and reconstruction differ in shape");
  if (r == 0) {
    PodBasis empty;
    empty.modes.resize(snapshots.rows(), 0);
    return empty;
  }
  const Eigen::MatrixXd residual = snapshots - reconstruction;
  require(residual.squaredNorm() > 0.0, ErrorKind::InvalidInput, "residual has zero energy; POD modes undefined");
  return pod(residual, r);
}

Eigen::VectorXd project_onto(const Eigen::MatrixXd& v, const Eigen::VectorXd& z) {
  require(v.rows() == z.size(), ErrorKind::Dimension, "state length differs from basis rows");
  const Eigen::MatrixXd m1 = v.transpose() * v;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m1);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.rcond() > 1e-12) return ldlt.solve(v.transpose() * z);
  return v.completeOrthogonalDecomposition().solve(z);
}

Eigen::Vector2d projection_error(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                                 const Eigen::MatrixXd& states, const Eigen::MatrixXd& paths,
                                 const std::vector<double>& times) {
  require(states.cols() == paths.cols() && states.cols() == static_cast<Eigen::Index>(times.size()),
          ErrorKind::Dimension, "states, paths and times must align");
  const Eigen::Index n_x = states.rows() / 2;
  const Eigen::Index s = states.cols();
  Eigen::VectorXd err_t(s), err_s(s), ref_t(s), ref_s(s);
  for (Eigen::Index j = 0; j < s; ++j) {
    const Eigen::MatrixXd v = assemble_V(frames, tail, paths.col(j));
    const Eigen::VectorXd z = states.col(j);
    const Eigen::VectorXd d = z - v * project_onto(v, z);
    err_t(j) = d.head(n_x).squaredNorm();
    err_s(j) = d.tail(n_x).squaredNorm();
    ref_t(j) = z.head(n_x).squaredNorm();
    ref_s(j) = z.tail(n_x).squaredNorm();
  }
  auto ratio = [&](const Eigen::VectorXd& num, const Eigen::VectorXd& den) {
    const double d = s > 1 ? trapezoid(times, den) : den.sum();
    require(d > 0, ErrorKind::UndefinedError, "reference trajectory has zero norm");
    return std::sqrt((s > 1 ? trapezoid(times, num) : num.sum()) / d);
  };
  return {ratio(err_t, ref_t), ratio(err_s, ref_s)};
}

}  // namespace smor
