// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Semi-discretized 1D wildland fire model on a periodic grid.
//
//   dT/dt = k T'' - v T' - alpha gamma T + alpha S r(T, beta)
//   dS/dt = -gamma_s S r(T, beta),      r(T, beta) = exp(-beta / T) for T > 0
//
// T is the temperature relative to ambient. The stacked state is z = [T; S].

#pragma once

#include "smor/core/integrate.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <span>

namespace smor {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Grid1D {
  double length_m = 1000.0;
  std::size_t n_x = 3000;
  bool periodic = true;

  static Grid1D make(double length_m, std::size_t n_x);
  double dx() const { return length_m / static_cast<double>(n_x); }
  Eigen::Index n() const { return static_cast<Eigen::Index>(n_x); }
  double node(std::size_t i) const { return static_cast<double>(i) * dx(); }
  Eigen::VectorXd nodes() const;
  void validate() const;
};

struct FireParams {
  double k = 0.2136;         // m^2/s
  double v = 0.0;            // m/s
  double alpha = 187.93;     // K/s
  double beta = 558.49;      // K
  double gamma = 4.8372e-5;  // 1/K
  double gamma_s = 0.1625;   // 1/s
  double t_ambient = 300.0;  // K

  void validate() const;
  /// Coefficients of the affine operator channels (diffusion, advection, loss).
  std::array<double, 3> affine_weights() const { return {k, v, alpha * gamma}; }
};

struct FullState {
  Eigen::VectorXd temp_rel;
  Eigen::VectorXd smf;

  Eigen::VectorXd stacked() const;
  static FullState from_stacked(const Eigen::VectorXd& z);
};

/// Sixth-order finite-difference operators.
struct DiffOps {
  SparseMatrix d1;           // periodic first derivative
  SparseMatrix d2;           // periodic second derivative
  SparseMatrix d1_onesided;  // first derivative with one-sided boundary closures

  static DiffOps build(const Grid1D& grid);
  Eigen::Index n() const { return d1.rows(); }
};

/// The parameter-independent pieces A_nu of A(mu) = sum_nu q_nu(mu) A_nu,
/// each acting on the temperature block only. Channel order matches
/// FireParams::affine_weights(): k d2, -v d1, -alpha gamma I.
enum class AffineChannel : int { Diffusion = 0, Advection = 1, Loss = 2 };
inline constexpr int kAffineChannels = 3;

/// y = A_nu restricted to the temperature block, applied to columns of x.
Eigen::MatrixXd apply_affine_block(const DiffOps& ops, AffineChannel channel, const Eigen::MatrixXd& x);

/// Dense full-state A_nu (2 n_x square). For tests and small grids only.
Eigen::MatrixXd assemble_affine_dense(const DiffOps& ops, AffineChannel channel);

Eigen::VectorXd arrhenius_rate(const Eigen::Ref<const Eigen::VectorXd>& temp_rel, double beta);

/// f = S .* r(T, beta).
Eigen::VectorXd nonlinearity_f(const Eigen::Ref<const Eigen::VectorXd>& smf,
                               const Eigen::Ref<const Eigen::VectorXd>& temp_rel, double beta);

/// Scalar kernel shared by the full and the reduced nonlinearity.
inline double reaction(double smf, double temp_rel, double beta);

/// dz/dt for the stacked state. dz must already have size 2 n_x.
void fom_rhs(const Eigen::VectorXd& z, const FireParams& params, const DiffOps& ops, Eigen::VectorXd& dz);
FullState fom_rhs(const FullState& state, const FireParams& params, const DiffOps& ops);

/// Nonlinearity snapshots f(S, T, beta) for each column of a stacked state matrix.
Eigen::MatrixXd nonlinearity_snapshots(const Eigen::MatrixXd& states, double beta);

FullState initial_condition_gaussian(const Grid1D& grid);

/// Integrates the full-order model from z0 and returns states at output_times.
OdeSolution run_fom(const FireParams& params, const Grid1D& grid, const Eigen::VectorXd& z0, double t0, double tf,
                    std::span<const double> output_times, const IntegratorConfig& cfg);

inline constexpr double kSeparatedIcBeta = 558.49;
inline constexpr double kSeparatedIcTime = 700.0;

/// State after integrating the Gaussian initial condition for 700 s at
/// beta = 558.49 K. Cached under cache_dir keyed by (n_x, beta, t); pass an
/// empty path to disable caching.
FullState initial_condition_separated(const FireParams& params, const Grid1D& grid, const IntegratorConfig& cfg,
                                      const std::filesystem::path& cache_dir);

// ---------------------------------------------------------------------------

inline double reaction(double smf, double temp_rel, double beta) {
  return temp_rel > 0.0 ? smf * std::exp(-beta / temp_rel) : 0.0;
}

}  // namespace smor
