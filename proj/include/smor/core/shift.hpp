// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Discrete shift transformations. shift(phi, p)(x_i) ~ phi(x_i - p): positive
// p moves a feature towards larger x. Fractional shifts use cubic Lagrange
// interpolation on the nodes {j-1, j, j+1, j+2} around the source point.

#pragma once

#include "smor/core/fom.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace smor {

enum class Extrapolation { Constant, Zero, Periodic };

struct ShiftOperator {
  Grid1D grid;
  Extrapolation extrapolation = Extrapolation::Constant;
};

/// Columnwise shift of a block of grid functions (n_x rows).
Eigen::MatrixXd shift_apply(const ShiftOperator& op, const Eigen::MatrixXd& modes, double p);
Eigen::VectorXd shift_apply(const ShiftOperator& op, const Eigen::VectorXd& mode, double p);

/// d/dp shift(phi, p) = T_0(p)(-D phi), where T_0 uses zero extrapolation
/// and D carries one-sided boundary closures.
Eigen::MatrixXd shift_derivative_apply(const ShiftOperator& op, const Eigen::MatrixXd& modes, double p,
                                       const SparseMatrix& d1_onesided);
Eigen::VectorXd shift_derivative_apply(const ShiftOperator& op, const Eigen::VectorXd& mode, double p,
                                       const SparseMatrix& d1_onesided);

/// Modes of one co-moving frame. All blocks are n_x rows with unit-norm columns.
struct TransformedFrame {
  ShiftOperator shift_op;
  Eigen::MatrixXd temp_modes;
  Eigen::MatrixXd smf_modes;
  Eigen::MatrixXd nonlin_modes;

  Eigen::Index state_modes() const { return temp_modes.cols() + smf_modes.cols(); }
};

/// Untransformed modes appended after the frames. temp/smf are n_x rows.
struct PodTail {
  Eigen::MatrixXd temp_modes;
  Eigen::MatrixXd smf_modes;
  Eigen::MatrixXd nonlin_modes;

  Eigen::Index state_modes() const { return temp_modes.cols() + smf_modes.cols(); }
  bool empty() const { return state_modes() == 0 && nonlin_modes.cols() == 0; }
};

/// Column layout shared by V, W, a_hat and D(a_hat): for every frame its
/// temperature modes then its smf modes, followed by the POD tail
/// (temperature, then smf).
struct ModeLayout {
  std::vector<Eigen::Index> frame_begin;  // first column of each frame
  std::vector<Eigen::Index> frame_size;
  Eigen::Index pod_begin = 0;
  Eigen::Index pod_size = 0;
  Eigen::Index nonlin_total = 0;

  static ModeLayout of(const std::vector<TransformedFrame>& frames, const PodTail& tail);
  Eigen::Index total() const { return pod_begin + pod_size; }
  Eigen::Index frames() const { return static_cast<Eigen::Index>(frame_begin.size()); }
};

struct FrameMatrices {
  Eigen::MatrixXd v;  // 2 n_x x r
  Eigen::MatrixXd w;  // 2 n_x x r, zero columns for the POD tail
};

FrameMatrices assemble_V_W(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                           const Eigen::VectorXd& p, const SparseMatrix& d1_onesided);

/// V(p) only.
Eigen::MatrixXd assemble_V(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                           const Eigen::VectorXd& p);

/// Shifted nonlinearity basis U(p) (n_x x m): frames in order, then POD tail.
Eigen::MatrixXd assemble_U(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                           const Eigen::VectorXd& p);

/// D(a_hat): r x q, column rho holds the coefficients of frame rho.
Eigen::MatrixXd coefficient_arrangement(const ModeLayout& layout, const Eigen::VectorXd& a_hat);

}  // namespace smor
