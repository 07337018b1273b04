// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Online reduced models. Nothing in the right-hand sides touches arrays of
// the full dimension n; lifting to the full state is done only for output.

#pragma once

#include "smor/core/fom.hpp"
#include "smor/core/integrate.hpp"
#include "smor/core/path_tables.hpp"
#include "smor/core/shift.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace smor {

/// POD-DEIM Galerkin ROM.
struct PodRom {
  Eigen::MatrixXd basis;                           // 2 n_x x r, lifting only
  std::array<Eigen::MatrixXd, kAffineChannels> a;  // V^T A_nu V
  Eigen::MatrixXd deim;                            // V^T (c (x) U) (S^T U)^{-1}, r x m
  Eigen::MatrixXd v_tilde;                         // rows [sel; sel + n_x] of V, 2m x r
  std::vector<std::uint64_t> selection;

  Eigen::Index dof() const { return basis.cols(); }
};

/// Block basis diag(temp_modes, smf_modes) with a QDEIM hyper-reduction of f.
PodRom build_pod_rom(const Eigen::MatrixXd& temp_modes, const Eigen::MatrixXd& smf_modes,
                     const Eigen::MatrixXd& nonlin_modes, const DiffOps& ops, double alpha, double gamma_s);

Eigen::VectorXd pod_rom_rhs(const Eigen::VectorXd& a_hat, const FireParams& params, const PodRom& rom);

struct SwitchingStage {
  double t_switch = 100.0;
  PodRom pre;
  Eigen::VectorXd a0_pre;
};

struct ReducedModel {
  Grid1D grid;
  FireParams params;  // coefficients baked into the tables; beta is free online
  std::vector<TransformedFrame> frames;
  PodTail tail;
  PathTables tables;
  Eigen::VectorXd a0;     // initial coefficients (non-switched case)
  Eigen::VectorXd p0;     // initial paths
  Eigen::VectorXd x_ref;  // absolute front positions belonging to p = 0
  std::optional<SwitchingStage> switching;

  ModeLayout layout() const { return ModeLayout::of(frames, tail); }
  Eigen::Index reduced_dim() const { return layout().total(); }
  Eigen::Index paths() const { return static_cast<Eigen::Index>(frames.size()); }
  void validate() const;
};

struct ReducedState {
  Eigen::VectorXd a_hat;
  Eigen::VectorXd p;
};

struct TromDiagnostics {
  bool regularized = false;
  bool clamped = false;
  double rcond = 0.0;
};

/// Evaluates the transformed-modes ROM for fixed parameters. Holds scratch
/// buffers, so one instance must not be shared between threads.
class TromEvaluator {
 public:
  TromEvaluator(const ReducedModel& model, const FireParams& params);

  void operator()(const Eigen::VectorXd& a_hat, const Eigen::VectorXd& p, Eigen::VectorXd& da,
                  Eigen::VectorXd& dp);

  const Eigen::MatrixXd& last_mass() const { return mass_; }
  const TromDiagnostics& last() const { return diag_; }
  std::size_t regularized_count() const { return n_regularized_; }
  std::size_t clamped_count() const { return n_clamped_; }

 private:
  const ReducedModel& model_;
  FireParams params_;
  ModeLayout layout_;
  std::array<double, kAffineChannels> q_;
  std::vector<Eigen::MatrixXd> a1_mu_, a2_mu_;  // per sample, assembled lazily
  std::vector<char> assembled_;
  Eigen::MatrixXd mass_, d_, nd_;
  Eigen::VectorXd rhs_, g_, f_, sol_;
  Eigen::MatrixXd lin_m1_, lin_m2_, lin_n_, lin_a1_, lin_a2_;
  TromDiagnostics diag_;
  std::size_t n_regularized_ = 0;
  std::size_t n_clamped_ = 0;

  void ensure(std::size_t k);
};

ReducedState trom_rhs(const ReducedState& state, const FireParams& params, const ReducedModel& model,
                      TromDiagnostics* diag = nullptr);

/// Full state z = V(p) a_hat.
Eigen::VectorXd lift(const ReducedModel& model, const Eigen::VectorXd& a_hat, const Eigen::VectorXd& p);

struct OnlineResult {
  std::vector<double> times;
  Eigen::MatrixXd reduced;      // post-switch coefficients and paths, stacked [a; p]
  Eigen::MatrixXd paths;        // q x times (NaN before the switch)
  Eigen::MatrixXd states;       // lifted 2 n_x x times (empty if not requested)
  double wall_time_s = 0.0;     // integration and handoff, without lifting
  double handoff_residual = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_steps = 0;
  std::size_t n_regularized = 0;
  std::size_t n_clamped = 0;
};

/// Transformed ROM from (a0, p0) on [t0, tf].
OnlineResult run_trom(const ReducedModel& model, const FireParams& params, const Eigen::VectorXd& a0,
                      const Eigen::VectorXd& p0, double t0, double tf, const std::vector<double>& output_times,
                      const IntegratorConfig& cfg, bool lift_states = true);

/// POD-DEIM ROM from a0 on [t0, tf].
OnlineResult run_pod_rom(const PodRom& rom, const FireParams& params, const Eigen::VectorXd& a0, double t0,
                         double tf, const std::vector<double>& output_times, const IntegratorConfig& cfg,
                         bool lift_states = true);

/// Coefficients and paths of the transformed ROM that best represent the
/// full state z: fronts are tracked on z and the state is projected onto
/// span V(p). Returns the relative projection residual through residual.
ReducedState handoff_state(const ReducedModel& model, const Eigen::VectorXd& z, const DiffOps& ops,
                           double* residual);

/// POD-DEIM up to t_switch, handoff, transformed ROM up to tf.
OnlineResult run_switched(const ReducedModel& model, const FireParams& params, double tf,
                          const std::vector<double>& output_times, const IntegratorConfig& cfg,
                          bool lift_states = true);

/// Dispatches to run_switched or run_trom from the stored initial state.
OnlineResult simulate(const ReducedModel& model, const FireParams& params, double tf,
                      const std::vector<double>& output_times, const IntegratorConfig& cfg, bool lift_states = true);

}  // namespace smor
