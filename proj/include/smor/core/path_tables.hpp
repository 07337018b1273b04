// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sampling of the path-dependent reduced matrices on the active subspace of
// the path variables, and the nearest-sample lookup used online.

#pragma once

#include "smor/core/fom.hpp"
#include "smor/core/shift.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace smor {

struct ActiveSubspace {
  int dim = 1;                // 1: sample along `direction`; 2: tensor grid over (p1, p2)
  Eigen::VectorXd direction;  // length q, scaled so that direction(0) == 1
  Eigen::VectorXd singular_values;

  /// Coordinate of p along the direction: (e . p) / (e . e).
  double coordinate(const Eigen::VectorXd& p) const;
  Eigen::VectorXd point(double xi) const { return xi * direction; }
};

/// SVD of the q x s path matrix. A second singular value below
/// rel_tol * sigma_1 gives a one-dimensional subspace.
ActiveSubspace detect_active_subspace(const Eigen::MatrixXd& paths, double rel_tol = 1e-6);

struct SampleAxis {
  double origin = 0.0;
  double step = 1.0;
  Eigen::Index count = 1;

  double at(Eigen::Index k) const { return origin + step * static_cast<double>(k); }
  double end() const { return at(count - 1); }
  /// Nearest sample, ties to the lower index, clamped to [0, count).
  Eigen::Index nearest(double x, bool* clamped = nullptr) const;
  static SampleAxis covering(double lo, double hi, double step);
};

/// Reduced matrices at one sample point of the path space.
struct PathSample {
  Eigen::MatrixXd m1, m2, n;                          // V^T V, W^T W, V^T W
  std::array<Eigen::MatrixXd, kAffineChannels> a1;    // V^T A_nu V
  std::array<Eigen::MatrixXd, kAffineChannels> a2;    // W^T A_nu V
  Eigen::MatrixXd v_hat;                              // V^T (c (x) U) (S^T U)^{-1}, r x m
  Eigen::MatrixXd w_hat;                              // W^T (c (x) U) (S^T U)^{-1}, r x m
  Eigen::MatrixXd v_tilde;                            // rows [sel; sel + n_x] of V, 2m x r
  std::vector<std::uint64_t> selection;               // sDEIM rows into f (n_x)
  double selection_rcond = 0.0;                       // sigma_min / sigma_max of S^T U
};

struct PathTables {
  ActiveSubspace subspace;
  std::vector<SampleAxis> axes;  // one axis for dim 1, q axes for dim 2
  std::vector<PathSample> samples;
  bool linear = false;           // linear interpolation of M1, M2, N, A1, A2 between samples

  std::size_t sample_count() const { return samples.size(); }
  /// Flat sample index for the nearest grid point of p.
  std::size_t locate(const Eigen::VectorXd& p, bool* clamped = nullptr) const;
  Eigen::VectorXd sample_point(std::size_t k) const;
};

struct SamplingRequest {
  double lo = 0.0;           // range of the subspace coordinate
  double hi = 300.0;
  double step = 20.0 / 3.0;
  double alpha = 187.93;     // c = [alpha; -gamma_s]
  double gamma_s = 0.1625;
  unsigned workers = 0;      // 0: hardware concurrency
  // Coordinates the training paths reach. Samples at the ends of a
  // one-dimensional range where the sDEIM system is singular are dropped,
  // but never inside this span.
  double need_lo = std::numeric_limits<double>::infinity();
  double need_hi = -std::numeric_limits<double>::infinity();
  // Ranges per path for the two-dimensional fallback grid.
  std::vector<std::array<double, 2>> fallback_ranges;
};

/// All reduced matrices at one path value.
PathSample assemble_path_sample(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                                const DiffOps& ops, const Eigen::VectorXd& p, double alpha, double gamma_s);

/// Samples every reduced matrix on the active subspace. Samples are computed
/// in parallel and stored in grid order.
PathTables sample_path_tables(const std::vector<TransformedFrame>& frames, const PodTail& tail, const DiffOps& ops,
                              const ActiveSubspace& subspace, const SamplingRequest& req);

/// QDEIM on U; if S^T U is numerically singular, repeat once with rows that
/// duplicate an earlier row removed from the candidate set.
std::vector<std::uint64_t> select_sdeim_points(const Eigen::MatrixXd& u, double* rcond_out = nullptr);

}  // namespace smor
