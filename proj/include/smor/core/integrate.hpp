// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace smor {

struct IntegratorConfig {
  double rtol = 1e-3;
  double atol = 1e-6;
  double h_init = 1e-2;
  double h_max = 10.0;
  std::size_t max_steps = 5'000'000;

  void validate() const;
};

struct OdeSolution {
  std::vector<double> times;
  Eigen::MatrixXd states;  // state dim x times.size()
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
  std::size_t n_rhs = 0;
  double wall_time_s = 0.0;
};

/// dy = f(t, y). The output argument is preallocated to y.size().
using RhsFunction = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;

/// Adaptive Dormand-Prince 5(4) with FSAL and an elementary step-size
/// controller. Steps are shortened to land exactly on every output time.
OdeSolution solve_ivp(const RhsFunction& rhs, const Eigen::VectorXd& y0, double t0, double tf,
                      std::span<const double> output_times, const IntegratorConfig& cfg);

/// Equidistant output grid t0, t0+dt, ..., ending exactly at tf.
std::vector<double> uniform_times(double t0, double tf, double dt);

}  // namespace smor
