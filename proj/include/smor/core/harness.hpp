// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment driver: training data, offline builds, parameter sweeps and the
// POD versus sPOD comparison.

#pragma once

#include "smor/core/config.hpp"
#include "smor/core/metrics.hpp"
#include "smor/core/pipeline.hpp"
#include "smor/core/rom.hpp"

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace smor {

/// Initial state of the configured case (the separated-waves state is cached).
Eigen::VectorXd initial_state(const ExperimentConfig& cfg);

std::vector<double> output_times(const ExperimentConfig& cfg);

struct FomReference {
  double beta = 0.0;
  std::vector<double> times;
  Eigen::MatrixXd states;
  double wall_time_s = 0.0;
};

FomReference run_reference(const ExperimentConfig& cfg, double beta);

struct ManifestEntry {
  double beta = 0.0;
  std::filesystem::path states_file;
  std::filesystem::path nonlin_file;
  bool ok = false;
  std::string error;
};

struct TrainingManifest {
  std::filesystem::path path;
  std::string digest;
  std::vector<double> times;
  std::vector<ManifestEntry> entries;
};

/// FOM runs at every training beta; snapshots go to out_dir/training. A
/// failing beta is recorded in the manifest and the loop continues.
TrainingManifest generate_training_data(const ExperimentConfig& cfg);
TrainingManifest read_manifest(const std::filesystem::path& path);
std::vector<TrainingRun> load_training_runs(const TrainingManifest& manifest);

/// Training runs computed in memory (no files).
std::vector<TrainingRun> training_runs(const ExperimentConfig& cfg, const std::vector<double>& betas);

struct OfflineReport {
  std::vector<double> betas;
  std::vector<Eigen::Vector2d> offline_errors;  // (temperature, smf) per training run
  double seconds = 0.0;
  Eigen::Index dof = 0;
};

ReducedModel build_model(const ExperimentConfig& cfg, const std::vector<TrainingRun>& runs,
                         OfflineReport* report = nullptr);

struct RunMetrics {
  double beta = 0.0;
  double err_temp = 0.0;
  double err_smf = 0.0;
  double err = 0.0;  // max of both
  double fom_time_s = 0.0;
  double rom_time_s = 0.0;  // mean over repetitions
  double rom_time_min_s = 0.0;
  double rom_time_max_s = 0.0;
  double speedup = 0.0;
  Eigen::Index dof = 0;
  double handoff_residual = std::numeric_limits<double>::quiet_NaN();
  double smf_increase = 0.0;  // largest per-node increase of S between outputs
  std::size_t n_regularized = 0;
  std::size_t n_clamped = 0;
  bool ok = false;
  std::string error;
};

/// ROM run against a FOM reference, timed over cfg.timing_repetitions.
RunMetrics evaluate(const ExperimentConfig& cfg, const ReducedModel& model, const FomReference& ref);

struct SweepSummary {
  double err_min = 0.0, err_mean = 0.0, err_max = 0.0;
  double speedup_min = 0.0, speedup_mean = 0.0, speedup_max = 0.0;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
};

std::vector<RunMetrics> sweep(const ExperimentConfig& cfg, const ReducedModel& model, const std::vector<double>& betas);
SweepSummary summarize(const std::vector<RunMetrics>& rows);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<RunMetrics>& rows);

struct ParetoRow {
  std::string method;  // "spod-sdeim" or "pod-deim"
  Eigen::Index dof = 0;
  double wall_time_s = 0.0;
  double err_temp = 0.0;
  double err_smf = 0.0;
  double err = 0.0;
  bool ok = false;
  std::string error;
};

/// Both pipelines trained on the same runs and tested at test_beta.
std::vector<ParetoRow> pareto_compare(const ExperimentConfig& cfg, const std::vector<TrainingRun>& runs,
                                      double test_beta);
void write_pareto_csv(const std::filesystem::path& path, const std::vector<ParetoRow>& rows);

/// Largest increase of any smf entry between consecutive columns.
double max_smf_increase(const Eigen::MatrixXd& states);

/// "%.17g".
std::string format_real(double v);

}  // namespace smor
