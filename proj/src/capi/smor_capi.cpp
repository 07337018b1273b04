// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/smor.h"

#include "smor/core/errors.hpp"
#include "smor/core/harness.hpp"
#include "smor/core/model_io.hpp"
#include "smor/core/snapshot_io.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>

struct smor_config {
  smor::ExperimentConfig cfg;
  std::string scratch;
};

struct smor_model {
  smor::ReducedModel model;
};

namespace {

thread_local std::string g_last_error;

smor_status status_of(smor::ErrorKind kind) {
  using smor::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidInput: return SMOR_ERR_INVALID_INPUT;
    case ErrorKind::Dimension: return SMOR_ERR_DIMENSION;
    case ErrorKind::Stiffness: return SMOR_ERR_STIFFNESS;
    case ErrorKind::Budget: return SMOR_ERR_BUDGET;
    case ErrorKind::Divergence: return SMOR_ERR_DIVERGENCE;
    case ErrorKind::Selection: return SMOR_ERR_SELECTION;
    case ErrorKind::LinearSolve: return SMOR_ERR_LINEAR_SOLVE;
    case ErrorKind::Tracking: return SMOR_ERR_TRACKING;
    case ErrorKind::Offline: return SMOR_ERR_OFFLINE;
    case ErrorKind::Online: return SMOR_ERR_ONLINE;
    case ErrorKind::UndefinedError: return SMOR_ERR_UNDEFINED_ERROR;
    case ErrorKind::Io: return SMOR_ERR_IO;
    case ErrorKind::Format: return SMOR_ERR_FORMAT;
  }
  return SMOR_ERR_INTERNAL;
}

template <typename Fn>
smor_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return SMOR_OK;
  } catch (const smor::Error& e) {
    g_last_error = std::string(smor::to_string(e.kind())) + ": " + e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return SMOR_ERR_INTERNAL;
}

void need(const void* p, const char* name) {
  smor::require(p != nullptr, smor::ErrorKind::InvalidInput, std::string(name) + " must not be NULL");
}

smor::FireParams at_beta(const smor::ExperimentConfig& cfg, double beta) {
  smor::FireParams p = cfg.fire;
  p.beta = beta;
  p.validate();
  return p;
}

}  // namespace

extern "C" {

const char* smor_version(void) { return "0.1.0"; }

const char* smor_last_error(void) { return g_last_error.c_str(); }

const char* smor_status_name(smor_status status) {
  switch (status) {
    case SMOR_OK: return "ok";
    case SMOR_ERR_INVALID_INPUT: return "invalid input";
    case SMOR_ERR_DIMENSION: return "dimension mismatch";
    case SMOR_ERR_STIFFNESS: return "step size underflow";
    case SMOR_ERR_BUDGET: return "step budget exhausted";
    case SMOR_ERR_DIVERGENCE: return "divergence";
    case SMOR_ERR_SELECTION: return "point selection failed";
    case SMOR_ERR_LINEAR_SOLVE: return "linear solve failed";
    case SMOR_ERR_TRACKING: return "front tracking failed";
    case SMOR_ERR_OFFLINE: return "offline stage failed";
    case SMOR_ERR_ONLINE: return "online stage failed";
    case SMOR_ERR_UNDEFINED_ERROR: return "error undefined";
    case SMOR_ERR_IO: return "i/o error";
    case SMOR_ERR_FORMAT: return "format error";
    case SMOR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int smor_status_is_numerical(smor_status status) {
  switch (status) {
    case SMOR_ERR_STIFFNESS:
    case SMOR_ERR_BUDGET:
    case SMOR_ERR_DIVERGENCE:
    case SMOR_ERR_SELECTION:
    case SMOR_ERR_LINEAR_SOLVE:
    case SMOR_ERR_TRACKING:
    case SMOR_ERR_OFFLINE:
    case SMOR_ERR_ONLINE:
    case SMOR_ERR_UNDEFINED_ERROR: return 1;
    default: return 0;
  }
}

smor_status smor_set_log_level(const char* level) {
  return guarded([&] {
    need(level, "level");
    const auto lvl = spdlog::level::from_str(level);
    smor::require(lvl != spdlog::level::off || std::string(level) == "off", smor::ErrorKind::InvalidInput,
                  std::string("unknown log level '") + level + "'");
    spdlog::set_level(lvl);
  });
}

smor_status smor_config_create(smor_case experiment, const char* preset, smor_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    smor::require(experiment == SMOR_CASE_SEPARATED || experiment == SMOR_CASE_GAUSSIAN,
                  smor::ErrorKind::InvalidInput, "unknown case");
    auto h = std::make_unique<smor_config>();
    h->cfg = smor::make_preset(preset ? preset : "desk", experiment == SMOR_CASE_GAUSSIAN
                                                           ? smor::Case::Gaussian
                                                           : smor::Case::SeparatedWaves);
    *out = h.release();
  });
}

smor_status smor_config_load(const char* path, const char* preset, smor_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<smor_config>();
    h->cfg = smor::load_config(path, preset ? preset : "");
    *out = h.release();
  });
}

smor_status smor_config_apply_json(smor_config* cfg, const char* json) {
  return guarded([&] {
    need(cfg, "cfg");
    need(json, "json");
    smor::ExperimentConfig next = cfg->cfg;
    smor::apply_json(next, json);
    cfg->cfg = std::move(next);
  });
}

smor_status smor_config_set_out_dir(smor_config* cfg, const char* out_dir) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    cfg->cfg.out_dir = out_dir;
  });
}

smor_status smor_config_get_out_dir(smor_config* cfg, const char** out_dir) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    cfg->scratch = cfg->cfg.out_dir.string();
    *out_dir = cfg->scratch.c_str();
  });
}

smor_status smor_config_to_json(smor_config* cfg, const char** json) {
  return guarded([&] {
    need(cfg, "cfg");
    need(json, "json");
    cfg->scratch = smor::to_json(cfg->cfg);
    *json = cfg->scratch.c_str();
  });
}

smor_status smor_config_digest(smor_config* cfg, const char** digest) {
  return guarded([&] {
    need(cfg, "cfg");
    need(digest, "digest");
    cfg->scratch = cfg->cfg.digest();
    *digest = cfg->scratch.c_str();
  });
}

void smor_config_destroy(smor_config* cfg) { delete cfg; }

smor_status smor_fom_run(const smor_config* cfg, double beta, const char* out_path, double* wall_time_s) {
  return guarded([&] {
    need(cfg, "cfg");
    at_beta(cfg->cfg, beta);
    const smor::FomReference ref = smor::run_reference(cfg->cfg, beta);
    if (out_path) smor::io::write_matrix(out_path, ref.states);
    if (wall_time_s) *wall_time_s = ref.wall_time_s;
  });
}

smor_status smor_generate_training_data(const smor_config* cfg) {
  return guarded([&] {
    need(cfg, "cfg");
    const smor::TrainingManifest man = smor::generate_training_data(cfg->cfg);
    std::size_t failed = 0;
    for (const auto& e : man.entries) failed += e.ok ? 0 : 1;
    smor::require(failed < man.entries.size() || man.entries.empty(), smor::ErrorKind::Offline,
                  "every training run failed; see " + man.path.string());
  });
}

smor_status smor_offline_build(const smor_config* cfg, const char* manifest_path, smor_model** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = nullptr;
    std::vector<smor::TrainingRun> runs;
    if (manifest_path) {
      const smor::TrainingManifest man = smor::read_manifest(manifest_path);
      if (man.digest != cfg->cfg.digest())
        spdlog::warn("training data in {} was generated with a different configuration", manifest_path);
      runs = smor::load_training_runs(man);
    } else {
      runs = smor::training_runs(cfg->cfg, cfg->cfg.train_betas);
    }
    smor::OfflineReport report;
    auto h = std::make_unique<smor_model>();
    h->model = smor::build_model(cfg->cfg, runs, &report);
    for (std::size_t k = 0; k < report.betas.size(); ++k)
      spdlog::info("offline error at beta {}: T {:.3e}, S {:.3e}", report.betas[k], report.offline_errors[k](0),
                   report.offline_errors[k](1));
    spdlog::info("offline stage: {} dof, {:.2f} s", report.dof, report.seconds);
    *out = h.release();
  });
}

smor_status smor_model_save(const smor_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    smor::save_model(model->model, path);
  });
}

smor_status smor_model_load(const char* path, smor_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<smor_model>();
    h->model = smor::load_model(path);
    *out = h.release();
  });
}

smor_status smor_model_dof(const smor_model* model, size_t* dof) {
  return guarded([&] {
    need(model, "model");
    need(dof, "dof");
    *dof = static_cast<size_t>(model->model.reduced_dim() + model->model.paths());
  });
}

void smor_model_destroy(smor_model* model) { delete model; }

smor_status smor_rom_run(const smor_config* cfg, const smor_model* model, double beta, double tf,
                         const char* csv_path, const char* states_path, const char* reference_path,
                         smor_run_metrics* metrics) {
  return guarded([&] {
    need(cfg, "cfg");
    need(model, "model");
    smor::ExperimentConfig c = cfg->cfg;
    if (tf > 0) c.t_final = tf;
    const smor::FireParams params = at_beta(c, beta);
    const std::vector<double> times = smor::output_times(c);
    const bool lift = states_path || reference_path;
    const smor::OnlineResult res = smor::simulate(model->model, params, c.t_final, times, c.integrator, lift);
    if (states_path) smor::io::write_matrix(states_path, res.states);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    smor_run_metrics m{};
    m.beta = beta;
    m.err_temp = m.err_smf = m.err = nan;
    m.fom_time_s = m.speedup = nan;
    m.rom_time_s = res.wall_time_s;
    m.handoff_residual = res.handoff_residual;
    m.smf_increase = lift ? smor::max_smf_increase(res.states) : nan;
    m.dof = static_cast<size_t>(model->model.reduced_dim() + model->model.paths());

    Eigen::MatrixXd ref;
    if (reference_path) {
      ref = smor::io::read_matrix(reference_path);
      smor::require(ref.rows() == res.states.rows() && ref.cols() == res.states.cols(), smor::ErrorKind::Dimension,
                    "reference snapshots do not match the reduced run");
      const Eigen::Vector2d e = smor::relative_l2_error_blocks(ref, res.states, times);
      m.err_temp = e(0);
      m.err_smf = e(1);
      m.err = e.maxCoeff();
    }
    if (csv_path) {
      std::ofstream out(csv_path);
      smor::require(out.good(), smor::ErrorKind::Io, std::string("cannot write ") + csv_path);
      out << "time,err_temp,err_smf";
      for (Eigen::Index f = 0; f < res.paths.rows(); ++f) out << ",p" << f;
      out << '\n';
      const Eigen::Index n_x = res.states.rows() / 2;
      for (std::size_t j = 0; j < times.size(); ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        out << smor::format_real(times[j]) << ',';
        if (ref.size() > 0) {
          const double et = (ref.col(col).head(n_x) - res.states.col(col).head(n_x)).norm() / ref.col(col).head(n_x).norm();
          const double es = (ref.col(col).tail(n_x) - res.states.col(col).tail(n_x)).norm() / ref.col(col).tail(n_x).norm();
          out << smor::format_real(et) << ',' << smor::format_real(es);
        } else {
          out << ',';
        }
        for (Eigen::Index f = 0; f < res.paths.rows(); ++f) out << ',' << smor::format_real(res.paths(f, col));
        out << '\n';
      }
    }
    if (metrics) *metrics = m;
  });
}

smor_status smor_sweep(const smor_config* cfg, const smor_model* model, const char* csv_path,
                       smor_sweep_summary* summary) {
  return guarded([&] {
    need(cfg, "cfg");
    need(model, "model");
    const auto rows = smor::sweep(cfg->cfg, model->model, cfg->cfg.test_betas);
    if (csv_path) smor::write_sweep_csv(csv_path, rows);
    const smor::SweepSummary s = smor::summarize(rows);
    if (summary)
      *summary = {s.err_min, s.err_mean, s.err_max, s.speedup_min, s.speedup_mean, s.speedup_max, s.n_ok, s.n_failed};
  });
}

smor_status smor_compare(const smor_config* cfg, const char* manifest_path, double test_beta, const char* csv_path) {
  return guarded([&] {
    need(cfg, "cfg");
    need(csv_path, "csv_path");
    at_beta(cfg->cfg, test_beta);
    const std::vector<smor::TrainingRun> runs =
        manifest_path ? smor::load_training_runs(smor::read_manifest(manifest_path))
                      : smor::training_runs(cfg->cfg, cfg->cfg.train_betas);
    smor::write_pareto_csv(csv_path, smor::pareto_compare(cfg->cfg, runs, test_beta));
  });
}

}  // extern "C"
