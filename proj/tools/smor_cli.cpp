// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library only through smor.h.

#include "smor/smor.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

namespace {

struct Globals {
  std::string config;
  std::string preset;
  std::string out_dir;
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string log_level = "info";
};

int exit_code(smor_status s) {
  if (s == SMOR_OK) return 0;
  std::fprintf(stderr, "smor: %s (%s)\n", smor_last_error(), smor_status_name(s));
  return smor_status_is_numerical(s) ? 2 : 1;
}

class Config {
 public:
  ~Config() { smor_config_destroy(cfg_); }
  smor_status open(const Globals& g) {
    smor_status s = SMOR_OK;
    if (!g.config.empty()) {
      s = smor_config_load(g.config.c_str(), g.preset.empty() ? nullptr : g.preset.c_str(), &cfg_);
    } else {
      const smor_case c = g.experiment == "gaussian" ? SMOR_CASE_GAUSSIAN : SMOR_CASE_SEPARATED;
      s = smor_config_create(c, g.preset.empty() ? "desk" : g.preset.c_str(), &cfg_);
    }
    if (s != SMOR_OK) return s;
    if (!g.config.empty() && !g.experiment.empty()) {
      const std::string j = "{\"case\": \"" + g.experiment + "\"}";
      if ((s = smor_config_apply_json(cfg_, j.c_str())) != SMOR_OK) return s;
    }
    if (!g.out_dir.empty() && (s = smor_config_set_out_dir(cfg_, g.out_dir.c_str())) != SMOR_OK) return s;
    if (g.seed) {
      const std::string j = "{\"seed\": " + std::to_string(*g.seed) + "}";
      if ((s = smor_config_apply_json(cfg_, j.c_str())) != SMOR_OK) return s;
    }
    if (g.workers) {
      const std::string j = "{\"workers\": " + std::to_string(*g.workers) + "}";
      if ((s = smor_config_apply_json(cfg_, j.c_str())) != SMOR_OK) return s;
    }
    return SMOR_OK;
  }
  smor_config* get() const { return cfg_; }

 private:
  smor_config* cfg_ = nullptr;
};

class Model {
 public:
  ~Model() { smor_model_destroy(m_); }
  smor_model** out() { return &m_; }
  smor_model* get() const { return m_; }

 private:
  smor_model* m_ = nullptr;
};

std::string out_path(const Config& cfg, const std::string& name) {
  const char* dir = nullptr;
  if (smor_config_get_out_dir(cfg.get(), &dir) != SMOR_OK) return name;
  return std::string(dir) + "/" + name;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shifted-POD reduced models for a 1D wildland fire model"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--preset", g.preset, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--case", g.experiment, "separated or gaussian")->check(CLI::IsMember({"separated", "gaussian"}));
  app.add_option("--out-dir", g.out_dir, "output directory");
  app.add_option("--seed", g.seed, "seed for synthetic test noise");
  app.add_option("--workers", g.workers, "worker threads (0: hardware concurrency)");
  app.add_option("--log-level", g.log_level, "off, error, warn, info or debug");

  double beta = 558.49;
  double tf = 0.0;
  std::string out, model_file, reference, states, manifest;

  auto* fom = app.add_subcommand("fom-run", "full-order run; writes a snapshot file");
  fom->add_option("--beta", beta);
  fom->add_option("--out", out, "snapshot file")->required();

  app.add_subcommand("gen-data", "training runs under <out-dir>/training");

  auto* off = app.add_subcommand("offline", "build and save a reduced model");
  off->add_option("--manifest", manifest, "training manifest from gen-data (default: compute in memory)");
  off->add_option("--offline-out", out, "model file")->required();

  auto* rom = app.add_subcommand("rom-run", "reduced run; writes per-time errors and paths");
  rom->add_option("--model", model_file)->required();
  rom->add_option("--beta", beta);
  rom->add_option("--tf", tf, "final time (default: configured)");
  rom->add_option("--out", out, "CSV file")->required();
  rom->add_option("--reference", reference, "snapshot file from fom-run");
  rom->add_option("--states", states, "write lifted states to this snapshot file");

  auto* sw = app.add_subcommand("sweep", "FOM and ROM over the test betas");
  sw->add_option("--model", model_file)->required();
  sw->add_option("--out", out, "CSV file (default: <out-dir>/sweep.csv)");

  auto* cmp = app.add_subcommand("compare", "spod-sdeim against pod-deim at one beta");
  cmp->add_option("--manifest", manifest, "training manifest from gen-data");
  cmp->add_option("--beta", beta);
  cmp->add_option("--out", out, "CSV file (default: <out-dir>/compare.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  smor_status s = smor_set_log_level(g.log_level.c_str());
  if (s != SMOR_OK) return exit_code(s);
  Config cfg;
  if ((s = cfg.open(g)) != SMOR_OK) return exit_code(s);

  if (*fom) {
    double wall = 0.0;
    s = smor_fom_run(cfg.get(), beta, out.c_str(), &wall);
    if (s == SMOR_OK) std::printf("fom-run beta=%.17g wall_time_s=%.17g\n", beta, wall);
  } else if (app.got_subcommand("gen-data")) {
    s = smor_generate_training_data(cfg.get());
  } else if (*off) {
    Model m;
    s = smor_offline_build(cfg.get(), opt(manifest), m.out());
    if (s == SMOR_OK) s = smor_model_save(m.get(), out.c_str());
    size_t dof = 0;
    if (s == SMOR_OK && smor_model_dof(m.get(), &dof) == SMOR_OK) std::printf("offline dof=%zu model=%s\n", dof, out.c_str());
  } else if (*rom) {
    Model m;
    smor_run_metrics r{};
    s = smor_model_load(model_file.c_str(), m.out());
    if (s == SMOR_OK) s = smor_rom_run(cfg.get(), m.get(), beta, tf, out.c_str(), opt(states), opt(reference), &r);
    if (s == SMOR_OK)
      std::printf("rom-run beta=%.17g err_temp=%.17g err_smf=%.17g rom_time_s=%.17g\n", r.beta, r.err_temp, r.err_smf,
                  r.rom_time_s);
  } else if (*sw) {
    Model m;
    smor_sweep_summary sum{};
    if (out.empty()) out = out_path(cfg, "sweep.csv");
    s = smor_model_load(model_file.c_str(), m.out());
    if (s == SMOR_OK) s = smor_sweep(cfg.get(), m.get(), out.c_str(), &sum);
    if (s == SMOR_OK)
      std::printf("sweep ok=%zu failed=%zu err_mean=%.17g err_max=%.17g speedup_mean=%.17g csv=%s\n", sum.n_ok,
                  sum.n_failed, sum.err_mean, sum.err_max, sum.speedup_mean, out.c_str());
  } else if (*cmp) {
    if (out.empty()) out = out_path(cfg, "compare.csv");
    s = smor_compare(cfg.get(), opt(manifest), beta, out.c_str());
    if (s == SMOR_OK) std::printf("compare csv=%s\n", out.c_str());
  }
  return exit_code(s);
}
