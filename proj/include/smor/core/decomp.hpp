// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace smor {

struct PodBasis {
  Eigen::MatrixXd modes;            // n x r, orthonormal columns
  Eigen::VectorXd singular_values;  // leading singular values, non-increasing
  double energy_captured = 0.0;     // sum_{i<=r} sigma_i^2 / ||X||_F^2

  Eigen::Index rank() const { return modes.cols(); }
};

/// Leading r left singular vectors of the snapshot matrix. Each mode is
/// signed so that its largest-magnitude entry is positive.
PodBasis pod(const Eigen::MatrixXd& snapshots, std::size_t r);

/// Smallest basis with energy_captured >= threshold (0 < threshold <= 1).
PodBasis pod_energy(const Eigen::MatrixXd& snapshots, double threshold);

struct PointSelection {
  std::vector<Eigen::Index> indices;

  std::size_t size() const { return indices.size(); }
};

/// QDEIM: first m pivots of the column-pivoted QR of U^T.
PointSelection qdeim_points(const Eigen::MatrixXd& basis);

/// Rows of x at the selected indices.
Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& x, const PointSelection& sel);

/// (S^T U)^{-1}, with a linear-solve error when S^T U is numerically singular.
Eigen::MatrixXd deim_inverse(const Eigen::MatrixXd& basis, const PointSelection& sel);

/// U (S^T U)^{-1} f_at_points.
Eigen::VectorXd deim_apply(const Eigen::MatrixXd& basis, const PointSelection& sel,
                           const Eigen::VectorXd& f_at_points);

/// sigma_min / sigma_max of a small square matrix (0 for an empty one).
double inverse_condition(const Eigen::MatrixXd& a);

}  // namespace smor
