// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/model_io.hpp"

#include "smor/core/errors.hpp"

#include <string>

namespace smor {
namespace {

constexpr double kModelVersion = 1.0;

// Per-sample matrices are stored side by side: rows x (cols * samples).
template <typename Get>
Eigen::MatrixXd stack(const std::vector<PathSample>& samples, Get get) {
  const Eigen::MatrixXd& first = get(samples.front());
  Eigen::MatrixXd out(first.rows(), first.cols() * static_cast<Eigen::Index>(samples.size()));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Eigen::MatrixXd& m = get(samples[k]);
    require(m.rows() == first.rows() && m.cols() == first.cols(), ErrorKind::Dimension,
            "path samples have inconsistent shapes");
    out.middleCols(static_cast<Eigen::Index>(k) * first.cols(), first.cols()) = m;
  }
  return out;
}

Eigen::MatrixXd unstack(const Eigen::MatrixXd& all, std::size_t k, Eigen::Index cols) {
  return all.middleCols(static_cast<Eigen::Index>(k) * cols, cols);
}

void put_pod_rom(io::Container& c, const std::string& prefix, const PodRom& rom) {
  c.put(prefix + "basis", rom.basis);
  for (int ch = 0; ch < kAffineChannels; ++ch) c.put(prefix + "affine" + std::to_string(ch), rom.a[static_cast<std::size_t>(ch)]);
  c.put(prefix + "deim", rom.deim);
  c.put(prefix + "v_tilde", rom.v_tilde);
  c.put_indices(prefix + "selection", rom.selection);
}

PodRom get_pod_rom(const io::Container& c, const std::string& prefix) {
  PodRom rom;
  rom.basis = c.matrix(prefix + "basis");
  for (int ch = 0; ch < kAffineChannels; ++ch) rom.a[static_cast<std::size_t>(ch)] = c.matrix(prefix + "affine" + std::to_string(ch));
  rom.deim = c.matrix(prefix + "deim");
  rom.v_tilde = c.matrix(prefix + "v_tilde");
  rom.selection = c.indices(prefix + "selection");
  return rom;
}

}  // namespace

io::Container to_container(const ReducedModel& model) {
  model.validate();
  io::Container c;
  c.put_scalar("model/version", kModelVersion);
  Eigen::VectorXd grid(3);
  grid << model.grid.length_m, static_cast<double>(model.grid.n_x), model.grid.periodic ? 1.0 : 0.0;
  c.put("grid", grid);
  const FireParams& p = model.params;
  Eigen::VectorXd params(7);
  params << p.k, p.v, p.alpha, p.beta, p.gamma, p.gamma_s, p.t_ambient;
  c.put("params", params);

  c.put_scalar("frames/count", static_cast<double>(model.frames.size()));
  for (std::size_t f = 0; f < model.frames.size(); ++f) {
    const std::string pre = "frame" + std::to_string(f) + "/";
    const auto& fr = model.frames[f];
    c.put_scalar(pre + "extrapolation", static_cast<double>(static_cast<int>(fr.shift_op.extrapolation)));
    c.put(pre + "temp", fr.temp_modes);
    c.put(pre + "smf", fr.smf_modes);
    c.put(pre + "nonlin", fr.nonlin_modes);
  }
  c.put("tail/temp", model.tail.temp_modes);
  c.put("tail/smf", model.tail.smf_modes);
  c.put("tail/nonlin", model.tail.nonlin_modes);

  const PathTables& t = model.tables;
  c.put_scalar("tables/dim", t.subspace.dim);
  c.put("tables/direction", t.subspace.direction);
  c.put("tables/singular_values", t.subspace.singular_values);
  c.put_scalar("tables/linear", t.linear ? 1.0 : 0.0);
  Eigen::MatrixXd axes(static_cast<Eigen::Index>(t.axes.size()), 3);
  for (std::size_t i = 0; i < t.axes.size(); ++i)
    axes.row(static_cast<Eigen::Index>(i)) << t.axes[i].origin, t.axes[i].step, static_cast<double>(t.axes[i].count);
  c.put("tables/axes", axes);
  const auto& s = t.samples;
  c.put_scalar("tables/samples", static_cast<double>(s.size()));
  c.put("tables/m1", stack(s, [](const PathSample& x) -> const Eigen::MatrixXd& { return x.m1; }));
  c.put("tables/m2", stack(s, [](const PathSample& x) -> const Eigen::MatrixXd& { return x.m2; }));
  c.put("tables/n", stack(s, [](const PathSample& x) -> const Eigen::MatrixXd& { return x.n; }));
  for (int ch = 0; ch < kAffineChannels; ++ch) {
    const auto i = static_cast<std::size_t>(ch);
    c.put("tables/a1_" + std::to_string(ch), stack(s, [i](const PathSample& x) -> const Eigen::MatrixXd& { return x.a1[i]; }));
    c.put("tables/a2_" + std::to_string(ch), stack(s, [i](const PathSample& x) -> const Eigen::MatrixXd& { return x.a2[i]; }));
  }
  c.put("tables/v_hat", stack(s, [](const PathSample& x) -> const Eigen::MatrixXd& { return x.v_hat; }));
  c.put("tables/w_hat", stack(s, [](const PathSample& x) -> const Eigen::MatrixXd& { return x.w_hat; }));
  c.put("tables/v_tilde", stack(s, [](const PathSample& x) -> const Eigen::MatrixXd& { return x.v_tilde; }));
  std::vector<std::uint64_t> sel;
  Eigen::VectorXd rcond(static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) {
    sel.insert(sel.end(), s[k].selection.begin(), s[k].selection.end());
    rcond(static_cast<Eigen::Index>(k)) = s[k].selection_rcond;
  }
  c.put_indices("tables/selection", sel);
  c.put("tables/selection_rcond", rcond);

  c.put("state/a0", model.a0);
  c.put("state/p0", model.p0);
  c.put("state/x_ref", model.x_ref);
  c.put_scalar("switch/present", model.switching ? 1.0 : 0.0);
  if (model.switching) {
    c.put_scalar("switch/t_switch", model.switching->t_switch);
    c.put("switch/a0", model.switching->a0_pre);
    put_pod_rom(c, "switch/", model.switching->pre);
  }
  return c;
}

ReducedModel from_container(const io::Container& c) {
  require(c.contains("model/version") && c.scalar("model/version") == kModelVersion, ErrorKind::Format,
          "not a reduced model file or unsupported version");
  ReducedModel m;
  const Eigen::VectorXd grid = c.vector("grid");
  require(grid.size() == 3, ErrorKind::Format, "malformed grid entry");
  m.grid = Grid1D::make(grid(0), static_cast<std::size_t>(grid(1)));
  m.grid.periodic = grid(2) != 0.0;
  const Eigen::VectorXd p = c.vector("params");
  require(p.size() == 7, ErrorKind::Format, "malformed params entry");
  m.params = {p(0), p(1), p(2), p(3), p(4), p(5), p(6)};

  const auto nf = static_cast<std::size_t>(c.scalar("frames/count"));
  for (std::size_t f = 0; f < nf; ++f) {
    const std::string pre = "frame" + std::to_string(f) + "/";
    TransformedFrame fr;
    fr.shift_op.grid = m.grid;
    fr.shift_op.extrapolation = static_cast<Extrapolation>(static_cast<int>(c.scalar(pre + "extrapolation")));
    fr.temp_modes = c.matrix(pre + "temp");
    fr.smf_modes = c.matrix(pre + "smf");
    fr.nonlin_modes = c.matrix(pre + "nonlin");
    m.frames.push_back(std::move(fr));
  }
  m.tail.temp_modes = c.matrix("tail/temp");
  m.tail.smf_modes = c.matrix("tail/smf");
  m.tail.nonlin_modes = c.matrix("tail/nonlin");

  PathTables& t = m.tables;
  t.subspace.dim = static_cast<int>(c.scalar("tables/dim"));
  t.subspace.direction = c.vector("tables/direction");
  t.subspace.singular_values = c.vector("tables/singular_values");
  t.linear = c.scalar("tables/linear") != 0.0;
  const Eigen::MatrixXd axes = c.matrix("tables/axes");
  for (Eigen::Index i = 0; i < axes.rows(); ++i)
    t.axes.push_back({axes(i, 0), axes(i, 1), static_cast<Eigen::Index>(axes(i, 2))});
  const auto ns = static_cast<std::size_t>(c.scalar("tables/samples"));
  require(ns > 0, ErrorKind::Format, "model has no path samples");
  const ModeLayout layout = m.layout();
  const Eigen::Index r = layout.total();
  const Eigen::Index mm = layout.nonlin_total;
  const Eigen::MatrixXd m1 = c.matrix("tables/m1"), m2 = c.matrix("tables/m2"), n = c.matrix("tables/n");
  std::array<Eigen::MatrixXd, kAffineChannels> a1, a2;
  for (int ch = 0; ch < kAffineChannels; ++ch) {
    a1[static_cast<std::size_t>(ch)] = c.matrix("tables/a1_" + std::to_string(ch));
    a2[static_cast<std::size_t>(ch)] = c.matrix("tables/a2_" + std::to_string(ch));
  }
  const Eigen::MatrixXd vh = c.matrix("tables/v_hat"), wh = c.matrix("tables/w_hat"), vt = c.matrix("tables/v_tilde");
  const auto sel = c.indices("tables/selection");
  const Eigen::VectorXd rc = c.vector("tables/selection_rcond");
  require(m1.cols() == r * static_cast<Eigen::Index>(ns) && sel.size() == ns * static_cast<std::size_t>(mm) &&
              rc.size() == static_cast<Eigen::Index>(ns),
          ErrorKind::Format, "table sizes do not match the stored modes");
  t.samples.resize(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    PathSample& s = t.samples[k];
    s.m1 = unstack(m1, k, r);
    s.m2 = unstack(m2, k, r);
    s.n = unstack(n, k, r);
    for (std::size_t ch = 0; ch < kAffineChannels; ++ch) {
      s.a1[ch] = unstack(a1[ch], k, r);
      s.a2[ch] = unstack(a2[ch], k, r);
    }
    s.v_hat = unstack(vh, k, mm);
    s.w_hat = unstack(wh, k, mm);
    s.v_tilde = unstack(vt, k, r);
    s.selection.assign(sel.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(mm)),
                       sel.begin() + static_cast<std::ptrdiff_t>((k + 1) * static_cast<std::size_t>(mm)));
    s.selection_rcond = rc(static_cast<Eigen::Index>(k));
  }

  m.a0 = c.vector("state/a0");
  m.p0 = c.vector("state/p0");
  m.x_ref = c.vector("state/x_ref");
  if (c.scalar("switch/present") != 0.0) {
    SwitchingStage sw;
    sw.t_switch = c.scalar("switch/t_switch");
    sw.a0_pre = c.vector("switch/a0");
    sw.pre = get_pod_rom(c, "switch/");
    m.switching = std::move(sw);
  }
  m.validate();
  return m;
}

void save_model(const ReducedModel& model, const std::filesystem::path& path) { to_container(model).save(path); }

ReducedModel load_model(const std::filesystem::path& path) { return from_container(io::Container::load(path)); }

}  // namespace smor
