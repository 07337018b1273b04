// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "smor/core/decomp.hpp"
#include "smor/core/fom.hpp"
#include "smor/core/shift.hpp"

#include <Eigen/Dense>

#include <vector>

namespace smor {

/// Frame 0 follows the right-going wave (p >= 0, right half of the domain),
/// frame 1 the left-going wave (p <= 0, left half).
inline constexpr int kRightFrame = 0;
inline constexpr int kLeftFrame = 1;

struct PathTrajectory {
  std::vector<double> times;
  Eigen::MatrixXd raw_paths;     // q x s, meters
  Eigen::MatrixXd smooth_paths;  // q x s
  Eigen::VectorXd origin;        // absolute front positions at which p = 0

  Eigen::Index frames() const { return raw_paths.rows(); }
};

/// Absolute front positions (meters) of one temperature profile: the extremal
/// node of d1 T, most negative for the right-going front and most positive for
/// the left-going one, refined to sub-cell accuracy by a three-point parabola.
Eigen::Vector2d front_positions(const Eigen::VectorXd& temp, const SparseMatrix& d1, double dx);

/// Tracks both fronts through the temperature snapshots. Paths are relative
/// to the first column; origin holds the absolute positions there.
PathTrajectory track_fronts(const Eigen::MatrixXd& temp_snapshots, const SparseMatrix& d1, double dx,
                            const std::vector<double>& times);

/// Moves the path origin to x_ref: p = x - x_ref.
void reanchor_paths(PathTrajectory& traj, const Eigen::VectorXd& x_ref);

enum class SmoothingMode { FullLinear, TailLinear };

struct Smoothing {
  SmoothingMode mode = SmoothingMode::FullLinear;
  double fraction = 0.985;  // trailing fraction replaced for TailLinear
};

PathTrajectory smooth_paths(const PathTrajectory& raw, const Smoothing& how);

/// Co-moving data per frame: the half-domain of each frame is kept, the other
/// half zeroed, and every column shifted back by -p_rho(t).
std::vector<Eigen::MatrixXd> separate_waves(const Eigen::MatrixXd& snapshots, const Eigen::MatrixXd& paths,
                                            const ShiftOperator& op);

struct FrameModeCounts {
  Eigen::Index temp = 1;
  Eigen::Index smf = 1;
  Eigen::Index nonlin = 2;
};

/// POD of each frame's co-moving temperature, smf and nonlinearity data.
std::vector<TransformedFrame> build_frame_bases(const std::vector<Eigen::MatrixXd>& comoving_temp,
                                                const std::vector<Eigen::MatrixXd>& comoving_smf,
                                                const std::vector<Eigen::MatrixXd>& comoving_nonlin,
                                                const FrameModeCounts& counts, const ShiftOperator& op);

/// Least-squares polynomial fit of each row of coeffs over fit_times,
/// evaluated at target_times.
Eigen::MatrixXd extrapolate_coefficients(const std::vector<double>& fit_times, const Eigen::MatrixXd& coeffs,
                                         int degree, const std::vector<double>& target_times);

/// POD of snapshots - reconstruction. Returns an empty basis for r = 0.
PodBasis residual_pod(const Eigen::MatrixXd& snapshots, const Eigen::MatrixXd& reconstruction, std::size_t r);

/// Relative errors (temperature, smf) of the orthogonal projection of each
/// stacked snapshot onto span V(p(t)).
Eigen::Vector2d projection_error(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                                 const Eigen::MatrixXd& states, const Eigen::MatrixXd& paths,
                                 const std::vector<double>& times);

/// Coefficients of z in span V(p) via the normal equations with M1.
Eigen::VectorXd project_onto(const Eigen::MatrixXd& v, const Eigen::VectorXd& z);

}  // namespace smor
