// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/harness.hpp"

#include "smor/core/errors.hpp"
#include "smor/core/snapshot_io.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace smor {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string beta_tag(double beta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", beta);
  return buf;
}

FireParams with_beta(const FireParams& p, double beta) {
  FireParams out = p;
  out.beta = beta;
  return out;
}

SamplingRequest sampling_of(const ExperimentConfig& cfg) {
  SamplingRequest req = cfg.sampling;
  req.workers = cfg.workers;
  req.alpha = cfg.fire.alpha;
  req.gamma_s = cfg.fire.gamma_s;
  return req;
}

// Runs fn over [0, n) on a bounded pool; fn must write only to its own slot.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

Eigen::VectorXd initial_state(const ExperimentConfig& cfg) {
  if (cfg.experiment == Case::Gaussian) return initial_condition_gaussian(cfg.grid).stacked();
  std::filesystem::create_directories(cfg.cache());
  return initial_condition_separated(cfg.fire, cfg.grid, cfg.integrator, cfg.cache()).stacked();
}

std::vector<double> output_times(const ExperimentConfig& cfg) { return uniform_times(0.0, cfg.t_final, cfg.snapshot_dt); }

FomReference run_reference(const ExperimentConfig& cfg, double beta) {
  FomReference ref;
  ref.beta = beta;
  ref.times = output_times(cfg);
  const OdeSolution sol =
      run_fom(with_beta(cfg.fire, beta), cfg.grid, initial_state(cfg), 0.0, cfg.t_final, ref.times, cfg.integrator);
  ref.states = sol.states;
  ref.wall_time_s = sol.wall_time_s;
  return ref;
}

TrainingManifest generate_training_data(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::filesystem::path dir = cfg.out_dir / "training";
  std::filesystem::create_directories(dir);
  TrainingManifest man;
  man.path = dir / "manifest.json";
  man.digest = cfg.digest();
  man.times = output_times(cfg);
  for (double beta : cfg.train_betas) {
    ManifestEntry e;
    e.beta = beta;
    e.states_file = dir / ("states_beta" + beta_tag(beta) + ".smor");
    e.nonlin_file = dir / ("nonlin_beta" + beta_tag(beta) + ".smor");
    try {
      const FomReference ref = run_reference(cfg, beta);
      io::write_matrix(e.states_file, ref.states);
      io::write_matrix(e.nonlin_file, nonlinearity_snapshots(ref.states, beta));
      e.ok = true;
      spdlog::info("training beta {} done in {:.2f} s", beta, ref.wall_time_s);
    } catch (const Error& err) {
      e.error = err.what();
      spdlog::error("training run at beta {} failed: {}", beta, err.what());
    }
    man.entries.push_back(e);
  }
  nlohmann::json j;
  j["digest"] = man.digest;
  j["t0"] = 0.0;
  j["t_final"] = cfg.t_final;
  j["snapshot_dt"] = cfg.snapshot_dt;
  j["columns"] = man.times.size();
  j["runs"] = nlohmann::json::array();
  for (const auto& e : man.entries)
    j["runs"].push_back({{"beta", e.beta},
                         {"states", e.states_file.filename().string()},
                         {"nonlinearity", e.nonlin_file.filename().string()},
                         {"ok", e.ok},
                         {"error", e.error}});
  std::ofstream out(man.path);
  require(out.good(), ErrorKind::Io, "cannot write " + man.path.string());
  out << j.dump(2) << "\n";
  return man;
}

TrainingManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open manifest " + path.string());
  TrainingManifest man;
  man.path = path;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    man.digest = j.at("digest").get<std::string>();
    man.times = uniform_times(j.at("t0").get<double>(), j.at("t_final").get<double>(), j.at("snapshot_dt").get<double>());
    for (const auto& r : j.at("runs")) {
      ManifestEntry e;
      e.beta = r.at("beta").get<double>();
      e.states_file = path.parent_path() / r.at("states").get<std::string>();
      e.nonlin_file = path.parent_path() / r.at("nonlinearity").get<std::string>();
      e.ok = r.at("ok").get<bool>();
      e.error = r.at("error").get<std::string>();
      man.entries.push_back(e);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, std::string("malformed manifest: ") + e.what());
  }
  return man;
}

std::vector<TrainingRun> load_training_runs(const TrainingManifest& man) {
  std::vector<TrainingRun> runs;
  for (const auto& e : man.entries) {
    if (!e.ok) continue;
    TrainingRun r;
    r.beta = e.beta;
    r.times = man.times;
    r.states = io::read_matrix(e.states_file);
    r.nonlin = io::read_matrix(e.nonlin_file);
    require(r.states.cols() == static_cast<Eigen::Index>(r.times.size()), ErrorKind::Format,
            "snapshot file does not match the manifest time grid");
    runs.push_back(std::move(r));
  }
  require(!runs.empty(), ErrorKind::Offline, "manifest lists no successful training runs");
  return runs;
}

std::vector<TrainingRun> training_runs(const ExperimentConfig& cfg, const std::vector<double>& betas) {
  std::vector<TrainingRun> runs;
  for (double beta : betas) {
    FomReference ref = run_reference(cfg, beta);
    runs.push_back(make_training_run(beta, std::move(ref.times), std::move(ref.states)));
  }
  return runs;
}

ReducedModel build_model(const ExperimentConfig& cfg, const std::vector<TrainingRun>& runs, OfflineReport* report) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ReducedModel model;
  std::vector<PathTrajectory> paths;
  if (cfg.experiment == Case::SeparatedWaves) {
    const SeparatedOffline prep = prepare_separated(runs, cfg.grid, cfg.fire, cfg.frame_counts());
    model = finalize_separated(prep, cfg.frame_counts(), sampling_of(cfg));
    paths = prep.paths;
  } else {
    model = build_gaussian_model(runs, cfg.grid, cfg.fire, cfg.gaussian, sampling_of(cfg), &paths);
  }
  model.tables.linear = cfg.linear_tables;
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (report) {
    report->seconds = seconds;
    report->dof = model.reduced_dim() + model.paths();
    report->betas.clear();
    report->offline_errors.clear();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      report->betas.push_back(runs[k].beta);
      report->offline_errors.push_back(offline_error(model, runs[k], paths[k]));
    }
  }
  return model;
}

double max_smf_increase(const Eigen::MatrixXd& states) {
  if (states.cols() < 2) return 0.0;
  const Eigen::Index n_x = states.rows() / 2;
  double worst = 0.0;
  for (Eigen::Index j = 1; j < states.cols(); ++j)
    worst = std::max(worst, (states.col(j).tail(n_x) - states.col(j - 1).tail(n_x)).maxCoeff());
  return worst;
}

RunMetrics evaluate(const ExperimentConfig& cfg, const ReducedModel& model, const FomReference& ref) {
  RunMetrics m;
  m.beta = ref.beta;
  m.fom_time_s = ref.wall_time_s;
  m.dof = model.reduced_dim() + model.paths();
  const FireParams params = with_beta(cfg.fire, ref.beta);
  try {
    std::vector<double> times;
    for (int rep = 0; rep < cfg.timing_repetitions; ++rep) {
      OnlineResult res = simulate(model, params, cfg.t_final, ref.times, cfg.integrator, rep == 0);
      times.push_back(res.wall_time_s);
      if (rep == 0) {
        const Eigen::Vector2d e = relative_l2_error_blocks(ref.states, res.states, ref.times);
        m.err_temp = e(0);
        m.err_smf = e(1);
        m.err = e.maxCoeff();
        m.handoff_residual = res.handoff_residual;
        m.smf_increase = max_smf_increase(res.states);
        m.n_regularized = res.n_regularized;
        m.n_clamped = res.n_clamped;
      }
    }
    m.rom_time_min_s = *std::min_element(times.begin(), times.end());
    m.rom_time_max_s = *std::max_element(times.begin(), times.end());
    double sum = 0.0;
    for (double t : times) sum += t;
    m.rom_time_s = sum / static_cast<double>(times.size());
    m.speedup = m.rom_time_s > 0 ? m.fom_time_s / m.rom_time_s : 0.0;
    m.ok = std::isfinite(m.err);
    if (!m.ok) m.error = "non-finite error";
  } catch (const Error& e) {
    m.ok = false;
    m.error = e.what();
  }
  return m;
}

std::vector<RunMetrics> sweep(const ExperimentConfig& cfg, const ReducedModel& model, const std::vector<double>& betas) {
  std::vector<RunMetrics> rows(betas.size());
  if (cfg.experiment == Case::SeparatedWaves) initial_state(cfg);  // fill the cache before workers start
  std::mutex log_mutex;
  parallel_for(betas.size(), cfg.workers, [&](std::size_t i) {
    RunMetrics m;
    m.beta = betas[i];
    try {
      const FomReference ref = run_reference(cfg, betas[i]);
      m = evaluate(cfg, model, ref);
    } catch (const Error& e) {
      m.ok = false;
      m.error = std::string("reference run failed: ") + e.what();
    }
    {
      std::lock_guard<std::mutex> lock(log_mutex);
      if (m.ok)
        spdlog::info("beta {:.2f}: err {:.3e} (T {:.3e}, S {:.3e}), speedup {:.1f}", m.beta, m.err, m.err_temp,
                     m.err_smf, m.speedup);
      else
        spdlog::warn("beta {:.2f} failed: {}", m.beta, m.error);
    }
    rows[i] = std::move(m);
  });
  return rows;
}

SweepSummary summarize(const std::vector<RunMetrics>& rows) {
  SweepSummary s;
  double esum = 0.0, ssum = 0.0;
  s.err_min = s.speedup_min = std::numeric_limits<double>::infinity();
  s.err_max = s.speedup_max = 0.0;
  for (const auto& r : rows) {
    if (!r.ok) {
      ++s.n_failed;
      continue;
    }
    ++s.n_ok;
    s.err_min = std::min(s.err_min, r.err);
    s.err_max = std::max(s.err_max, r.err);
    s.speedup_min = std::min(s.speedup_min, r.speedup);
    s.speedup_max = std::max(s.speedup_max, r.speedup);
    esum += r.err;
    ssum += r.speedup;
  }
  if (s.n_ok > 0) {
    s.err_mean = esum / static_cast<double>(s.n_ok);
    s.speedup_mean = ssum / static_cast<double>(s.n_ok);
  } else {
    s.err_min = s.speedup_min = std::numeric_limits<double>::quiet_NaN();
    s.err_mean = s.err_max = s.speedup_mean = s.speedup_max = std::numeric_limits<double>::quiet_NaN();
  }
  if (s.n_failed > 0) spdlog::warn("{} of {} runs failed and are excluded from the summary", s.n_failed, rows.size());
  return s;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<RunMetrics>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write " + path.string());
  out << "beta,err_temp,err_smf,err,dof,handoff_residual,smf_increase,n_regularized,n_clamped,status,"
         "fom_time_s,rom_time_s,rom_time_min_s,rom_time_max_s,speedup\n";
  for (const auto& r : rows) {
    out << format_real(r.beta) << ',' << format_real(r.err_temp) << ',' << format_real(r.err_smf) << ','
        << format_real(r.err) << ',' << r.dof << ',' << format_real(r.handoff_residual) << ','
        << format_real(r.smf_increase) << ',' << r.n_regularized << ',' << r.n_clamped << ','
        << (r.ok ? "ok" : "failed") << ',' << format_real(r.fom_time_s) << ',' << format_real(r.rom_time_s) << ','
        << format_real(r.rom_time_min_s) << ',' << format_real(r.rom_time_max_s) << ','
        << format_real(r.speedup) << '\n';
  }
  const SweepSummary s = summarize(rows);
  const std::string status = "summary(" + std::to_string(s.n_failed) + " failed)";
  const double errs[3] = {s.err_min, s.err_mean, s.err_max};
  const double speed[3] = {s.speedup_min, s.speedup_mean, s.speedup_max};
  const char* names[3] = {"min", "mean", "max"};
  for (int i = 0; i < 3; ++i)
    out << names[i] << ",,," << format_real(errs[i]) << ",,,,,," << status << ",,,,," << format_real(speed[i]) << '\n';
}

std::vector<ParetoRow> pareto_compare(const ExperimentConfig& cfg, const std::vector<TrainingRun>& runs,
                                      double test_beta) {
  const FomReference ref = run_reference(cfg, test_beta);
  const FireParams params = with_beta(cfg.fire, test_beta);
  std::vector<ParetoRow> rows;

  auto timed = [&](ParetoRow& row, auto&& run_once) {
    try {
      double total = 0.0;
      for (int rep = 0; rep < cfg.timing_repetitions; ++rep) {
        OnlineResult res = run_once(rep == 0);
        total += res.wall_time_s;
        if (rep == 0) {
          const Eigen::Vector2d e = relative_l2_error_blocks(ref.states, res.states, ref.times);
          row.err_temp = e(0);
          row.err_smf = e(1);
          row.err = e.maxCoeff();
        }
      }
      row.wall_time_s = total / cfg.timing_repetitions;
      row.ok = std::isfinite(row.err);
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      row.err_temp = row.err_smf = row.err = std::numeric_limits<double>::infinity();
    }
    spdlog::info("{} dof {}: err {:.3e}, {:.4f} s{}", row.method, row.dof, row.err, row.wall_time_s,
                 row.ok ? "" : " (failed: " + row.error + ")");
  };

  std::vector<Eigen::Index> spod = cfg.pareto_spod;
  std::sort(spod.begin(), spod.end());
  if (!spod.empty()) {
    std::optional<SeparatedOffline> prep;
    if (cfg.experiment == Case::SeparatedWaves) {
      const Eigen::Index rmax = spod.back();
      prep = prepare_separated(runs, cfg.grid, cfg.fire, {rmax, rmax, cfg.nonlin_factor * rmax});
    }
    for (Eigen::Index r : spod) {
      ReducedModel model;
      if (prep) {
        model = finalize_separated(*prep, {r, r, cfg.nonlin_factor * r}, sampling_of(cfg));
      } else {
        GaussianOptions g = cfg.gaussian;
        g.counts = {r, r, cfg.nonlin_factor * r};
        model = build_gaussian_model(runs, cfg.grid, cfg.fire, g, sampling_of(cfg));
      }
      model.tables.linear = cfg.linear_tables;
      ParetoRow row;
      row.method = "spod-sdeim";
      row.dof = model.reduced_dim() + model.paths();
      timed(row, [&](bool lift) { return simulate(model, params, cfg.t_final, ref.times, cfg.integrator, lift); });
      rows.push_back(row);
    }
  }
  for (Eigen::Index total : cfg.pareto_pod) {
    ParetoRow row;
    row.method = "pod-deim";
    row.dof = total;
    try {
      const PodModel pm = build_pod_model(runs, cfg.grid, cfg.fire, total / 2, total);
      timed(row, [&](bool lift) {
        return run_pod_rom(pm.rom, params, pm.a0, 0.0, cfg.t_final, ref.times, cfg.integrator, lift);
      });
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      row.err_temp = row.err_smf = row.err = std::numeric_limits<double>::infinity();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_pareto_csv(const std::filesystem::path& path, const std::vector<ParetoRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write " + path.string());
  out << "method,dof,err_temp,err_smf,err,status,wall_time_s\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.dof << ',' << format_real(r.err_temp) << ',' << format_real(r.err_smf) << ','
        << format_real(r.err) << ',' << (r.ok ? "ok" : "failed") << ',' << format_real(r.wall_time_s) << '\n';
}

}  // namespace smor
