// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <vector>

namespace smor {

/// Trapezoidal rule for samples y(t_i).
double trapezoid(const std::vector<double>& times, const Eigen::VectorXd& values);

/// sqrt(int ||ref - approx||^2 dt) / sqrt(int ||ref||^2 dt), columns are time samples.
double relative_l2_error(const Eigen::MatrixXd& ref, const Eigen::MatrixXd& approx, const std::vector<double>& times);

/// Separate relative errors of the temperature and smf blocks of stacked states.
Eigen::Vector2d relative_l2_error_blocks(const Eigen::MatrixXd& ref, const Eigen::MatrixXd& approx,
                                         const std::vector<double>& times);

}  // namespace smor
