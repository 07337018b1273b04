// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration, read from JSON. Every key is optional; missing
// keys keep the values of the chosen preset.

#pragma once

#include "smor/core/fom.hpp"
#include "smor/core/integrate.hpp"
#include "smor/core/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace smor {

enum class Case { SeparatedWaves, Gaussian };

const char* to_string(Case c) noexcept;

struct ExperimentConfig {
  Case experiment = Case::SeparatedWaves;
  std::string preset = "desk";
  Grid1D grid = Grid1D::make(1000.0, 750);
  FireParams fire;
  IntegratorConfig integrator;

  double snapshot_dt = 1.0;
  double t_final = 1400.0;
  std::vector<double> train_betas{540.0, 560.0, 580.0};
  std::vector<double> test_betas;  // defaults to 81 points in [540, 580]

  // Separated-waves modes: per variable and frame; nonlinearity = factor * temp.
  Eigen::Index frame_modes = 1;
  Eigen::Index nonlin_factor = 2;

  GaussianOptions gaussian;
  SamplingRequest sampling;
  bool linear_tables = false;

  std::vector<Eigen::Index> pareto_spod{1, 2, 3, 4, 5, 6, 8};  // modes per variable and frame
  std::vector<Eigen::Index> pareto_pod{60, 80, 100, 120, 140, 160, 180, 200};  // total modes

  int timing_repetitions = 3;
  unsigned workers = 0;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "smor_out";
  std::filesystem::path cache_dir;  // empty: out_dir / "cache"

  void validate() const;
  FrameModeCounts frame_counts() const { return {frame_modes, frame_modes, nonlin_factor * frame_modes}; }
  std::filesystem::path cache() const { return cache_dir.empty() ? out_dir / "cache" : cache_dir; }
  /// Hash of every setting that can change numerical results.
  std::string digest() const;
};

/// Preset "desk" (n_x = 750, dp = 8/3 m) or "paper" (n_x = 3000, dp = 20/3 m
/// for separated waves and 1/3 m for the Gaussian case).
ExperimentConfig make_preset(const std::string& preset, Case experiment);

/// Applies a JSON document on top of cfg.
void apply_json(ExperimentConfig& cfg, const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path, const std::string& preset);
std::string to_json(const ExperimentConfig& cfg);

Case parse_case(const std::string& name);

/// n equidistant values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace smor
