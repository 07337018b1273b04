// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/config.hpp"

#include "smor/core/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <fstream>
#include <sstream>

namespace smor {

using nlohmann::json;

const char* to_string(Case c) noexcept { return c == Case::Gaussian ? "gaussian" : "separated_waves"; }

Case parse_case(const std::string& name) {
  if (name == "separated_waves" || name == "separated") return Case::SeparatedWaves;
  if (name == "gaussian") return Case::Gaussian;
  fail(ErrorKind::InvalidInput, "unknown case '" + name + "'");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

ExperimentConfig make_preset(const std::string& preset, Case experiment) {
  ExperimentConfig c;
  c.preset = preset;
  c.experiment = experiment;
  if (preset == "desk") {
    c.grid = Grid1D::make(1000.0, 750);
    c.sampling.step = 8.0 / 3.0;
  } else if (preset == "paper") {
    c.grid = Grid1D::make(1000.0, 3000);
    c.sampling.step = experiment == Case::Gaussian ? 1.0 / 3.0 : 20.0 / 3.0;
  } else {
    fail(ErrorKind::InvalidInput, "unknown preset '" + preset + "' (expected desk or paper)");
  }
  if (experiment == Case::Gaussian) {
    c.t_final = 2100.0;
    c.sampling.lo = 0.0;
    c.sampling.hi = 500.0;
  } else {
    c.t_final = 1400.0;
    c.sampling.lo = 0.0;
    c.sampling.hi = 300.0;
  }
  c.test_betas = linspace(540.0, 580.0, 81);
  return c;
}

void ExperimentConfig::validate() const {
  grid.validate();
  fire.validate();
  integrator.validate();
  require(snapshot_dt > 0 && t_final > 0, ErrorKind::InvalidInput, "snapshot_dt and t_final must be positive");
  require(!train_betas.empty(), ErrorKind::InvalidInput, "training betas must not be empty");
  for (double b : train_betas) require(b > 0, ErrorKind::InvalidInput, "training betas must be positive");
  for (double b : test_betas) require(b > 0, ErrorKind::InvalidInput, "test betas must be positive");
  require(frame_modes >= 1 && nonlin_factor >= 1, ErrorKind::InvalidInput, "mode counts must be positive");
  require(sampling.step > 0 && sampling.hi >= sampling.lo, ErrorKind::InvalidInput, "invalid sampling range");
  require(timing_repetitions >= 1, ErrorKind::InvalidInput, "timing repetitions must be at least 1");
  if (experiment == Case::Gaussian)
    require(gaussian.t_switch > 0 && gaussian.t_switch < t_final, ErrorKind::InvalidInput,
            "t_switch must lie inside (0, t_final)");
}

namespace {

template <typename T>
void get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json to_json_obj(const ExperimentConfig& c) {
  json j;
  j["case"] = to_string(c.experiment);
  j["preset"] = c.preset;
  j["grid"] = {{"n_x", c.grid.n_x}, {"length_m", c.grid.length_m}};
  j["fire"] = {{"k", c.fire.k},         {"v", c.fire.v},         {"alpha", c.fire.alpha},
               {"beta", c.fire.beta},   {"gamma", c.fire.gamma}, {"gamma_s", c.fire.gamma_s},
               {"t_ambient", c.fire.t_ambient}};
  j["integrator"] = {{"rtol", c.integrator.rtol},     {"atol", c.integrator.atol},
                     {"h_init", c.integrator.h_init}, {"h_max", c.integrator.h_max},
                     {"max_steps", c.integrator.max_steps}};
  j["snapshot_dt"] = c.snapshot_dt;
  j["t_final"] = c.t_final;
  j["train_betas"] = c.train_betas;
  j["test_betas"] = c.test_betas;
  j["modes"] = {{"frame_modes", c.frame_modes}, {"nonlin_factor", c.nonlin_factor}};
  const auto& g = c.gaussian;
  j["gaussian"] = {{"t_switch", g.t_switch},
                   {"pre_modes", g.pre_modes},
                   {"pre_deim", g.pre_deim},
                   {"frame_modes", g.counts.temp},
                   {"frame_nonlin", g.counts.nonlin},
                   {"tail_modes", g.tail_modes},
                   {"tail_nonlin", g.tail_nonlin},
                   {"fraction_temp", g.fraction_temp},
                   {"fraction_smf", g.fraction_smf},
                   {"fraction_nonlin", g.fraction_nonlin},
                   {"degree", g.degree},
                   {"tail_linear_fraction", g.smoothing.fraction}};
  j["sampling"] = {{"p_min", c.sampling.lo},
                   {"p_max", c.sampling.hi},
                   {"step", c.sampling.step},
                   {"interpolation", c.linear_tables ? "linear" : "constant"}};
  j["pareto"] = {{"spod_modes", c.pareto_spod}, {"pod_modes", c.pareto_pod}};
  j["timing_repetitions"] = c.timing_repetitions;
  j["workers"] = c.workers;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir.string();
  j["cache_dir"] = c.cache_dir.string();
  return j;
}

}  // namespace

void apply_json(ExperimentConfig& c, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidInput, std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), ErrorKind::InvalidInput, "config must be a JSON object");
  static const char* const kKeys[] = {"case",  "preset", "grid",        "fire",       "integrator", "snapshot_dt",
                                      "t_final", "train_betas", "test_betas", "modes", "gaussian", "sampling",
                                      "pareto", "timing_repetitions", "workers", "seed", "out_dir", "cache_dir"};
  for (const auto& item : j.items()) {
    const bool known = std::any_of(std::begin(kKeys), std::end(kKeys), [&](const char* k) { return item.key() == k; });
    require(known, ErrorKind::InvalidInput, "unknown config key '" + item.key() + "'");
  }
  try {
    if (j.contains("case")) c.experiment = parse_case(j.at("case").get<std::string>());
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      std::size_t n_x = c.grid.n_x;
      double len = c.grid.length_m;
      get(g, "n_x", n_x);
      get(g, "length_m", len);
      c.grid = Grid1D::make(len, n_x);
    }
    if (j.contains("fire")) {
      const json& f = j.at("fire");
      get(f, "k", c.fire.k);
      get(f, "v", c.fire.v);
      get(f, "alpha", c.fire.alpha);
      get(f, "beta", c.fire.beta);
      get(f, "gamma", c.fire.gamma);
      get(f, "gamma_s", c.fire.gamma_s);
      get(f, "t_ambient", c.fire.t_ambient);
    }
    if (j.contains("integrator")) {
      const json& i = j.at("integrator");
      get(i, "rtol", c.integrator.rtol);
      get(i, "atol", c.integrator.atol);
      get(i, "h_init", c.integrator.h_init);
      get(i, "h_max", c.integrator.h_max);
      get(i, "max_steps", c.integrator.max_steps);
    }
    get(j, "snapshot_dt", c.snapshot_dt);
    get(j, "t_final", c.t_final);
    get(j, "train_betas", c.train_betas);
    if (j.contains("test_betas")) {
      const json& t = j.at("test_betas");
      if (t.is_object())
        c.test_betas = linspace(t.at("min").get<double>(), t.at("max").get<double>(), t.at("count").get<std::size_t>());
      else
        c.test_betas = t.get<std::vector<double>>();
    }
    if (j.contains("modes")) {
      get(j.at("modes"), "frame_modes", c.frame_modes);
      get(j.at("modes"), "nonlin_factor", c.nonlin_factor);
    }
    if (j.contains("gaussian")) {
      const json& g = j.at("gaussian");
      auto& o = c.gaussian;
      get(g, "t_switch", o.t_switch);
      get(g, "pre_modes", o.pre_modes);
      get(g, "pre_deim", o.pre_deim);
      if (g.contains("frame_modes")) {
        o.counts.temp = o.counts.smf = g.at("frame_modes").get<Eigen::Index>();
      }
      get(g, "frame_nonlin", o.counts.nonlin);
      get(g, "tail_modes", o.tail_modes);
      get(g, "tail_nonlin", o.tail_nonlin);
      get(g, "fraction_temp", o.fraction_temp);
      get(g, "fraction_smf", o.fraction_smf);
      get(g, "fraction_nonlin", o.fraction_nonlin);
      get(g, "degree", o.degree);
      get(g, "tail_linear_fraction", o.smoothing.fraction);
    }
    if (j.contains("sampling")) {
      const json& s = j.at("sampling");
      get(s, "p_min", c.sampling.lo);
      get(s, "p_max", c.sampling.hi);
      get(s, "step", c.sampling.step);
      if (s.contains("interpolation")) {
        const auto mode = s.at("interpolation").get<std::string>();
        require(mode == "constant" || mode == "linear", ErrorKind::InvalidInput,
                "sampling.interpolation must be constant or linear");
        c.linear_tables = mode == "linear";
      }
    }
    if (j.contains("pareto")) {
      get(j.at("pareto"), "spod_modes", c.pareto_spod);
      get(j.at("pareto"), "pod_modes", c.pareto_pod);
    }
    get(j, "timing_repetitions", c.timing_repetitions);
    get(j, "workers", c.workers);
    get(j, "seed", c.seed);
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("cache_dir")) c.cache_dir = j.at("cache_dir").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("bad config value: ") + e.what());
  }
  c.validate();
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::string& preset) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  // The case decides preset values, so read it first.
  Case experiment = Case::SeparatedWaves;
  std::string chosen = preset;
  try {
    const json j = json::parse(text);
    if (j.contains("case")) experiment = parse_case(j.at("case").get<std::string>());
    if (chosen.empty() && j.contains("preset")) chosen = j.at("preset").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c = make_preset(chosen.empty() ? "desk" : chosen, experiment);
  apply_json(c, text);
  return c;
}

std::string to_json(const ExperimentConfig& cfg) { return to_json_obj(cfg).dump(2); }

std::string ExperimentConfig::digest() const {
  json j = to_json_obj(*this);
  for (const char* k : {"out_dir", "cache_dir", "workers", "timing_repetitions", "seed", "preset"}) j.erase(k);
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace smor
