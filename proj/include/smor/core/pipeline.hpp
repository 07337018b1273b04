// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Offline builders that turn training trajectories into reduced models.

#pragma once

#include "smor/core/offline.hpp"
#include "smor/core/path_tables.hpp"
#include "smor/core/rom.hpp"

#include <Eigen/Dense>

#include <vector>

namespace smor {

struct TrainingRun {
  double beta = 0.0;
  std::vector<double> times;
  Eigen::MatrixXd states;  // 2 n_x x s
  Eigen::MatrixXd nonlin;  // n_x x s, f(S, T, beta)
};

/// Builds a training run from stored states (the nonlinearity is evaluated on them).
TrainingRun make_training_run(double beta, std::vector<double> times, Eigen::MatrixXd states);

/// Separated-waves case after tracking and co-moving POD at the largest mode
/// counts. Smaller models are truncations of these nested bases.
struct SeparatedOffline {
  Grid1D grid;
  FireParams params;
  std::vector<TransformedFrame> frames;  // modes at the maximal counts
  std::vector<PathTrajectory> paths;     // per training run, anchored at x_ref
  Eigen::VectorXd x_ref;
  ActiveSubspace subspace;
  Eigen::VectorXd z0;                    // common initial state
};

SeparatedOffline prepare_separated(const std::vector<TrainingRun>& runs, const Grid1D& grid, const FireParams& params,
                                   const FrameModeCounts& max_counts);

ReducedModel finalize_separated(const SeparatedOffline& prep, const FrameModeCounts& counts,
                                const SamplingRequest& sampling);

struct GaussianOptions {
  double t_switch = 100.0;
  Eigen::Index pre_modes = 14;        // per variable
  Eigen::Index pre_deim = 28;
  FrameModeCounts counts{3, 3, 6};
  Eigen::Index tail_modes = 2;        // per variable
  Eigen::Index tail_nonlin = 4;
  double fraction_temp = 0.65;        // trailing share of the post-switch interval used for frame modes
  double fraction_smf = 0.80;
  double fraction_nonlin = 0.65;
  int degree = 1;
  Smoothing smoothing{SmoothingMode::TailLinear, 0.985};
};

ReducedModel build_gaussian_model(const std::vector<TrainingRun>& runs, const Grid1D& grid, const FireParams& params,
                                  const GaussianOptions& opts, const SamplingRequest& sampling,
                                  std::vector<PathTrajectory>* post_paths = nullptr);

/// Plain POD-DEIM baseline: r_var modes per variable and m DEIM modes.
struct PodModel {
  PodRom rom;
  Eigen::VectorXd a0;
};

PodModel build_pod_model(const std::vector<TrainingRun>& runs, const Grid1D& grid, const FireParams& params,
                         Eigen::Index r_var, Eigen::Index m);

/// Offline errors (temperature, smf) of a model on a training run: the
/// orthogonal projection onto the reduced space along the training paths.
Eigen::Vector2d offline_error(const ReducedModel& model, const TrainingRun& run, const PathTrajectory& paths);

/// Samples the tables over [lo, hi] extended to cover the given paths.
SamplingRequest covering_request(const SamplingRequest& base, const ActiveSubspace& subspace,
                                 const std::vector<PathTrajectory>& paths);

}  // namespace smor
