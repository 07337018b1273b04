// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/rom.hpp"

#include "smor/core/decomp.hpp"
#include "smor/core/errors.hpp"
#include "smor/core/offline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace smor {

namespace {

// Above this estimated condition number the mass matrix is solved in the
// minimum-norm least-squares sense.
constexpr double kMaxCondition = 1e12;
constexpr double kSvdCutoff = 1e-12;

void gather_stacked_rows(const Eigen::MatrixXd& v, const std::vector<std::uint64_t>& sel, Eigen::MatrixXd& out) {
  const Eigen::Index n_x = v.rows() / 2;
  const auto m = static_cast<Eigen::Index>(sel.size());
  out.resize(2 * m, v.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto row = static_cast<Eigen::Index>(sel[static_cast<std::size_t>(i)]);
    out.row(i) = v.row(row);
    out.row(m + i) = v.row(n_x + row);
  }
}

void reduced_nonlinearity(const Eigen::MatrixXd& v_tilde, const Eigen::VectorXd& a, double beta,
                          Eigen::VectorXd& g, Eigen::VectorXd& f) {
  const Eigen::Index m = v_tilde.rows() / 2;
  g.noalias() = v_tilde * a;
  f.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) f(i) = reaction(g(m + i), g(i), beta);
}

}  // namespace

PodRom build_pod_rom(const Eigen::MatrixXd& temp_modes, const Eigen::MatrixXd& smf_modes,
                     const Eigen::MatrixXd& nonlin_modes, const DiffOps& ops, double alpha, double gamma_s) {
  const Eigen::Index n_x = ops.n();
  require(temp_modes.rows() == n_x && smf_modes.rows() == n_x && nonlin_modes.rows() == n_x, ErrorKind::Dimension,
          "POD modes do not match the grid");
  const Eigen::Index rt = temp_modes.cols();
  const Eigen::Index r = rt + smf_modes.cols();
  PodRom rom;
  rom.basis = Eigen::MatrixXd::Zero(2 * n_x, r);
  rom.basis.topLeftCorner(n_x, rt) = temp_modes;
  rom.basis.bottomRightCorner(n_x, smf_modes.cols()) = smf_modes;
  const auto vt = rom.basis.topRows(n_x);
  const auto vb = rom.basis.bottomRows(n_x);
  for (int c = 0; c < kAffineChannels; ++c)
    rom.a[static_cast<std::size_t>(c)] = vt.transpose() * apply_affine_block(ops, static_cast<AffineChannel>(c), vt);
  if (nonlin_modes.cols() == 0) {
    rom.deim.resize(r, 0);
    rom.v_tilde.resize(0, r);
    return rom;
  }
  const PointSelection sel = qdeim_points(nonlin_modes);
  const Eigen::MatrixXd inv = deim_inverse(nonlin_modes, sel);
  rom.deim = (alpha * (vt.transpose() * nonlin_modes) - gamma_s * (vb.transpose() * nonlin_modes)) * inv;
  for (Eigen::Index i : sel.indices) rom.selection.push_back(static_cast<std::uint64_t>(i));
  gather_stacked_rows(rom.basis, rom.selection, rom.v_tilde);
  return rom;
}

Eigen::VectorXd pod_rom_rhs(const Eigen::VectorXd& a_hat, const FireParams& params, const PodRom& rom) {
  require(a_hat.size() == rom.dof(), ErrorKind::Dimension, "reduced state length differs from ROM dimension");
  const auto q = params.affine_weights();
  Eigen::VectorXd out = (q[0] * rom.a[0] + q[1] * rom.a[1] + q[2] * rom.a[2]) * a_hat;
  if (rom.deim.cols() > 0) {
    Eigen::VectorXd g, f;
    reduced_nonlinearity(rom.v_tilde, a_hat, params.beta, g, f);
    out.noalias() += rom.deim * f;
  }
  return out;
}

void ReducedModel::validate() const {
  grid.validate();
  const ModeLayout l = layout();
  require(a0.size() == 0 || a0.size() == l.total(), ErrorKind::Dimension, "initial coefficients do not match modes");
  require(p0.size() == 0 || p0.size() == paths(), ErrorKind::Dimension, "initial paths do not match frames");
  require(x_ref.size() == paths(), ErrorKind::Dimension, "front reference does not match frames");
  require(!tables.samples.empty(), ErrorKind::Dimension, "model has no path samples");
  for (const auto& s : tables.samples) {
    require(s.m1.rows() == l.total() && s.v_tilde.cols() == l.total(), ErrorKind::Dimension,
            "path sample dimensions do not match modes");
    require(s.v_hat.cols() == l.nonlin_total, ErrorKind::Dimension, "sDEIM tables do not match nonlinearity modes");
  }
  if (switching) require(switching->a0_pre.size() == switching->pre.dof(), ErrorKind::Dimension,
                         "pre-switch initial state does not match the POD basis");
}

TromEvaluator::TromEvaluator(const ReducedModel& model, const FireParams& params)
    : model_(model), params_(params), layout_(model.layout()), q_(params.affine_weights()) {
  params.validate();
  require(params.alpha == model.params.alpha && params.gamma_s == model.params.gamma_s, ErrorKind::InvalidInput,
          "alpha and gamma_s are baked into the sDEIM tables and cannot change online");
  const std::size_t s = model.tables.samples.size();
  a1_mu_.resize(s);
  a2_mu_.resize(s);
  assembled_.assign(s, 0);
  const Eigen::Index r = layout_.total();
  const Eigen::Index q = model.paths();
  mass_.resize(r + q, r + q);
  d_ = Eigen::MatrixXd::Zero(r, q);
  rhs_.resize(r + q);
}

void TromEvaluator::ensure(std::size_t k) {
  if (assembled_[k]) return;
  const PathSample& s = model_.tables.samples[k];
  a1_mu_[k] = q_[0] * s.a1[0] + q_[1] * s.a1[1] + q_[2] * s.a1[2];
  a2_mu_[k] = q_[0] * s.a2[0] + q_[1] * s.a2[1] + q_[2] * s.a2[2];
  assembled_[k] = 1;
}

void TromEvaluator::operator()(const Eigen::VectorXd& a_hat, const Eigen::VectorXd& p, Eigen::VectorXd& da,
                               Eigen::VectorXd& dp) {
  const Eigen::Index r = layout_.total();
  const Eigen::Index q = model_.paths();
  require(a_hat.size() == r && p.size() == q, ErrorKind::Dimension, "reduced state does not match the model");
  const PathTables& tables = model_.tables;

  bool clamped = false;
  const std::size_t k = tables.locate(p, &clamped);
  diag_.clamped = clamped;
  if (clamped) ++n_clamped_;
  const PathSample& s = tables.samples[k];
  ensure(k);

  const Eigen::MatrixXd* m1 = &s.m1;
  const Eigen::MatrixXd* m2 = &s.m2;
  const Eigen::MatrixXd* nmat = &s.n;
  const Eigen::MatrixXd* a1 = &a1_mu_[k];
  const Eigen::MatrixXd* a2 = &a2_mu_[k];
  if (tables.linear && tables.subspace.dim == 1 && tables.samples.size() > 1) {
    const SampleAxis& ax = tables.axes[0];
    const double u = std::clamp((tables.subspace.coordinate(p) - ax.origin) / ax.step, 0.0,
                                static_cast<double>(ax.count - 1));
    const auto k0 = std::min(static_cast<std::size_t>(std::floor(u)), tables.samples.size() - 2);
    const double w = u - static_cast<double>(k0);
    ensure(k0);
    ensure(k0 + 1);
    const PathSample& s0 = tables.samples[k0];
    const PathSample& s1 = tables.samples[k0 + 1];
    lin_m1_ = (1 - w) * s0.m1 + w * s1.m1;
    lin_m2_ = (1 - w) * s0.m2 + w * s1.m2;
    lin_n_ = (1 - w) * s0.n + w * s1.n;
    lin_a1_ = (1 - w) * a1_mu_[k0] + w * a1_mu_[k0 + 1];
    lin_a2_ = (1 - w) * a2_mu_[k0] + w * a2_mu_[k0 + 1];
    m1 = &lin_m1_;
    m2 = &lin_m2_;
    nmat = &lin_n_;
    a1 = &lin_a1_;
    a2 = &lin_a2_;
  }

  for (Eigen::Index f = 0; f < q; ++f) {
    const auto b = layout_.frame_begin[static_cast<std::size_t>(f)];
    const auto n = layout_.frame_size[static_cast<std::size_t>(f)];
    d_.col(f).segment(b, n) = a_hat.segment(b, n);
  }
  nd_.noalias() = *nmat * d_;
  mass_.topLeftCorner(r, r) = *m1;
  mass_.topRightCorner(r, q) = nd_;
  mass_.bottomLeftCorner(q, r) = nd_.transpose();
  mass_.bottomRightCorner(q, q).noalias() = d_.transpose() * (*m2) * d_;

  rhs_.head(r).noalias() = *a1 * a_hat;
  Eigen::VectorXd tmp = *a2 * a_hat;
  if (s.v_hat.cols() > 0) {
    reduced_nonlinearity(s.v_tilde, a_hat, params_.beta, g_, f_);
    rhs_.head(r).noalias() += s.v_hat * f_;
    tmp.noalias() += s.w_hat * f_;
  }
  rhs_.tail(q).noalias() = d_.transpose() * tmp;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(mass_);
  diag_.rcond = lu.rcond();
  // The LU condition estimate misses exactly singular pivots, so check them too.
  const auto piv = lu.matrixLU().diagonal().cwiseAbs();
  const bool pivots_ok = piv.size() == 0 || piv.minCoeff() * kMaxCondition >= piv.maxCoeff();
  diag_.regularized = !(pivots_ok && diag_.rcond * kMaxCondition >= 1.0);
  if (!diag_.regularized) {
    sol_ = lu.solve(rhs_);
    diag_.regularized = !sol_.allFinite();
  }
  if (diag_.regularized) {
    ++n_regularized_;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mass_, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = kSvdCutoff * sv(0);
    Eigen::VectorXd c = svd.matrixU().transpose() * rhs_;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = sv(i) > cut ? c(i) / sv(i) : 0.0;
    sol_ = svd.matrixV() * c;
  }
  if (!sol_.allFinite()) {
    std::ostringstream msg;
    msg << "transformed ROM mass system is singular; p = " << p.transpose() << ", |a| = " << a_hat.norm();
    fail(ErrorKind::Online, msg.str());
  }
  da = sol_.head(r);
  dp = sol_.tail(q);
}

ReducedState trom_rhs(const ReducedState& state, const FireParams& params, const ReducedModel& model,
                      TromDiagnostics* diag) {
  TromEvaluator eval(model, params);
  ReducedState out;
  eval(state.a_hat, state.p, out.a_hat, out.p);
  if (diag) *diag = eval.last();
  return out;
}

Eigen::VectorXd lift(const ReducedModel& model, const Eigen::VectorXd& a_hat, const Eigen::VectorXd& p) {
  return assemble_V(model.frames, model.tail, p) * a_hat;
}

OnlineResult run_trom(const ReducedModel& model, const FireParams& params, const Eigen::VectorXd& a0,
                      const Eigen::VectorXd& p0, double t0, double tf, const std::vector<double>& output_times,
                      const IntegratorConfig& cfg, bool lift_states) {
  const Eigen::Index r = model.reduced_dim();
  const Eigen::Index q = model.paths();
  require(a0.size() == r && p0.size() == q, ErrorKind::Dimension, "initial reduced state does not match the model");
  TromEvaluator eval(model, params);
  Eigen::VectorXd y0(r + q);
  y0 << a0, p0;
  Eigen::VectorXd da(r), dp(q);
  auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    eval(y.head(r), y.tail(q), da, dp);
    dy.head(r) = da;
    dy.tail(q) = dp;
  };
  const OdeSolution sol = solve_ivp(rhs, y0, t0, tf, output_times, cfg);
  OnlineResult out;
  out.times = sol.times;
  out.reduced = sol.states;
  out.paths = sol.states.bottomRows(q);
  out.wall_time_s = sol.wall_time_s;
  out.n_steps = sol.n_accepted;
  out.n_regularized = eval.regularized_count();
  out.n_clamped = eval.clamped_count();
  if (out.n_clamped > 0)
    spdlog::warn("path left the sampled range in {} right-hand side evaluations; tables were clamped", out.n_clamped);
  if (lift_states) {
    out.states.resize(2 * model.grid.n(), sol.states.cols());
    for (Eigen::Index j = 0; j < sol.states.cols(); ++j)
      out.states.col(j) = lift(model, sol.states.col(j).head(r), sol.states.col(j).tail(q));
  }
  return out;
}

OnlineResult run_pod_rom(const PodRom& rom, const FireParams& params, const Eigen::VectorXd& a0, double t0,
                         double tf, const std::vector<double>& output_times, const IntegratorConfig& cfg,
                         bool lift_states) {
  params.validate();
  require(a0.size() == rom.dof(), ErrorKind::Dimension, "initial reduced state does not match the ROM");
  const auto q = params.affine_weights();
  const Eigen::MatrixXd a_mu = q[0] * rom.a[0] + q[1] * rom.a[1] + q[2] * rom.a[2];
  Eigen::VectorXd g, f;
  auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.noalias() = a_mu * y;
    if (rom.deim.cols() > 0) {
      reduced_nonlinearity(rom.v_tilde, y, params.beta, g, f);
      dy.noalias() += rom.deim * f;
    }
  };
  const OdeSolution sol = solve_ivp(rhs, a0, t0, tf, output_times, cfg);
  OnlineResult out;
  out.times = sol.times;
  out.reduced = sol.states;
  out.wall_time_s = sol.wall_time_s;
  out.n_steps = sol.n_accepted;
  if (lift_states) out.states = rom.basis * sol.states;
  return out;
}

ReducedState handoff_state(const ReducedModel& model, const Eigen::VectorXd& z, const DiffOps& ops,
                           double* residual) {
  Eigen::Vector2d x;
  try {
    x = front_positions(z.head(model.grid.n()), ops.d1, model.grid.dx());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Tracking) throw;
    fail(ErrorKind::Tracking, std::string(e.what()) + " at the switching time; choose a later t_switch");
  }
  require(model.paths() == 2, ErrorKind::Dimension, "handoff tracking expects two frames");
  ReducedState s;
  s.p = x - model.x_ref;
  const Eigen::MatrixXd v = assemble_V(model.frames, model.tail, s.p);
  s.a_hat = project_onto(v, z);
  if (residual) {
    const double nz = z.norm();
    *residual = nz > 0 ? (z - v * s.a_hat).norm() / nz : 0.0;
  }
  return s;
}

OnlineResult run_switched(const ReducedModel& model, const FireParams& params, double tf,
                          const std::vector<double>& output_times, const IntegratorConfig& cfg, bool lift_states) {
  require(model.switching.has_value(), ErrorKind::InvalidInput, "model has no switching stage");
  const SwitchingStage& sw = *model.switching;
  const double ts = std::min(sw.t_switch, tf);
  std::vector<double> pre_times, post_times;
  for (double t : output_times) (t <= ts ? pre_times : post_times).push_back(t);
  const bool extra = pre_times.empty() || pre_times.back() < ts;
  if (extra) pre_times.push_back(ts);

  OnlineResult pre = run_pod_rom(sw.pre, params, sw.a0_pre, 0.0, ts, pre_times, cfg, lift_states);
  if (extra) {
    pre.times.pop_back();
  }
  const Eigen::VectorXd a_switch = pre.reduced.col(pre.reduced.cols() - 1);
  const auto n_pre = static_cast<Eigen::Index>(pre.times.size());

  OnlineResult out;
  out.times = pre.times;
  out.n_steps = pre.n_steps;
  out.wall_time_s = pre.wall_time_s;
  if (ts >= tf) {
    out.reduced = pre.reduced.leftCols(n_pre);
    out.paths = Eigen::MatrixXd::Constant(model.paths(), n_pre, std::numeric_limits<double>::quiet_NaN());
    if (lift_states) out.states = pre.states.leftCols(n_pre);
    return out;
  }

  const DiffOps ops = DiffOps::build(model.grid);
  const auto t_start = std::chrono::steady_clock::now();
  const Eigen::VectorXd z = sw.pre.basis * a_switch;
  double residual = 0.0;
  const ReducedState init = handoff_state(model, z, ops, &residual);
  const double handoff_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  std::vector<double> post_out = post_times;
  const bool need_start = post_out.empty() || post_out.front() > ts;
  if (need_start) post_out.insert(post_out.begin(), ts);
  OnlineResult post = run_trom(model, params, init.a_hat, init.p, ts, tf, post_out, cfg, lift_states);
  const Eigen::Index skip = need_start ? 1 : 0;
  const Eigen::Index n_post = static_cast<Eigen::Index>(post.times.size()) - skip;

  out.times.insert(out.times.end(), post.times.begin() + skip, post.times.end());
  out.reduced = post.reduced.rightCols(n_post);
  out.paths.resize(model.paths(), n_pre + n_post);
  out.paths.leftCols(n_pre).setConstant(std::numeric_limits<double>::quiet_NaN());
  out.paths.rightCols(n_post) = post.paths.rightCols(n_post);
  if (lift_states) {
    out.states.resize(2 * model.grid.n(), n_pre + n_post);
    out.states.leftCols(n_pre) = pre.states.leftCols(n_pre);
    out.states.rightCols(n_post) = post.states.rightCols(n_post);
  }
  out.wall_time_s += handoff_s + post.wall_time_s;
  out.handoff_residual = residual;
  out.n_steps += post.n_steps;
  out.n_regularized = post.n_regularized;
  out.n_clamped = post.n_clamped;
  return out;
}

OnlineResult simulate(const ReducedModel& model, const FireParams& params, double tf,
                      const std::vector<double>& output_times, const IntegratorConfig& cfg, bool lift_states) {
  if (model.switching) return run_switched(model, params, tf, output_times, cfg, lift_states);
  return run_trom(model, params, model.a0, model.p0, 0.0, tf, output_times, cfg, lift_states);
}

}  // namespace smor
