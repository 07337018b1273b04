// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

namespace testing {

inline constexpr double kPi = 3.14159265358979323846;

// Sixth-order central stencils, written out independently of the library.
inline Eigen::MatrixXd periodic_d1(int n, double dx) {
  const double c[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 1; k <= 3; ++k) {
      d(i, (i + k) % n) += c[k - 1] / dx;
      d(i, (i - k + n) % n) -= c[k - 1] / dx;
    }
  return d;
}

inline Eigen::MatrixXd periodic_d2(int n, double dx) {
  const double c[4] = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) += c[0] / (dx * dx);
    for (int k = 1; k <= 3; ++k) {
      d(i, (i + k) % n) += c[k] / (dx * dx);
      d(i, (i - k + n) % n) += c[k] / (dx * dx);
    }
  }
  return d;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

inline Eigen::MatrixXd orthonormal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(rows, cols, seed));
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("smor_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / b.norm(); }

}  // namespace testing
