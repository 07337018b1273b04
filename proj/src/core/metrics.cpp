// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/metrics.hpp"

#include "smor/core/errors.hpp"

#include <cmath>

namespace smor {

double trapezoid(const std::vector<double>& times, const Eigen::VectorXd& values) {
  require(static_cast<Eigen::Index>(times.size()) == values.size(), ErrorKind::Dimension,
          "time grid and samples differ in length");
  double acc = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    acc += 0.5 * (times[i] - times[i - 1]) * (values(k) + values(k - 1));
  }
  return acc;
}

double relative_l2_error(const Eigen::MatrixXd& ref, const Eigen::MatrixXd& approx, const std::vector<double>& times) {
  require(ref.rows() == approx.rows() && ref.cols() == approx.cols(), ErrorKind::Dimension,
          "trajectories differ in shape");
  require(ref.cols() == static_cast<Eigen::Index>(times.size()), ErrorKind::Dimension,
          "trajectory columns differ from time samples");
  const Eigen::VectorXd num = (ref - approx).colwise().squaredNorm().transpose();
  const Eigen::VectorXd den = ref.colwise().squaredNorm().transpose();
  const double d = times.size() > 1 ? trapezoid(times, den) : den.sum();
  require(d > 0.0, ErrorKind::UndefinedError, "reference trajectory has zero norm");
  const double n = times.size() > 1 ? trapezoid(times, num) : num.sum();
  return std::sqrt(n / d);
}

Eigen::Vector2d relative_l2_error_blocks(const Eigen::MatrixXd& ref, const Eigen::MatrixXd& approx,
                                         const std::vector<double>& times) {
  require(ref.rows() % 2 == 0, ErrorKind::Dimension, "stacked states must have even row count");
  require(ref.rows() == approx.rows(), ErrorKind::Dimension, "trajectories differ in shape");
  const Eigen::Index n = ref.rows() / 2;
  return {relative_l2_error(ref.topRows(n), approx.topRows(n), times),
          relative_l2_error(ref.bottomRows(n), approx.bottomRows(n), times)};
}

}  // namespace smor
