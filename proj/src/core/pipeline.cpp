// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/pipeline.hpp"

#include "smor/core/errors.hpp"
#include "smor/core/metrics.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace smor {
namespace {

Eigen::MatrixXd hcat(const std::vector<Eigen::MatrixXd>& blocks) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Eigen::MatrixXd out(blocks.empty() ? 0 : blocks.front().rows(), cols);
  Eigen::Index c = 0;
  for (const auto& b : blocks) {
    out.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  return out;
}

// Right-going fronts anchor at the slowest training front, left-going ones at
// the slowest as well, so training paths start at p_right >= 0, p_left <= 0.
Eigen::VectorXd anchor_reference(const std::vector<PathTrajectory>& traj) {
  Eigen::VectorXd x = traj.front().origin;
  for (const auto& t : traj) {
    x(kRightFrame) = std::min(x(kRightFrame), t.origin(kRightFrame));
    x(kLeftFrame) = std::max(x(kLeftFrame), t.origin(kLeftFrame));
  }
  return x;
}

Eigen::MatrixXd all_paths(const std::vector<PathTrajectory>& traj) {
  std::vector<Eigen::MatrixXd> blocks;
  for (const auto& t : traj) blocks.push_back(t.smooth_paths);
  return hcat(blocks);
}

std::vector<TransformedFrame> truncate(const std::vector<TransformedFrame>& frames, const FrameModeCounts& c) {
  std::vector<TransformedFrame> out;
  for (const auto& f : frames) {
    require(c.temp <= f.temp_modes.cols() && c.smf <= f.smf_modes.cols() && c.nonlin <= f.nonlin_modes.cols(),
            ErrorKind::InvalidInput, "requested mode count exceeds the prepared bases");
    TransformedFrame t;
    t.shift_op = f.shift_op;
    t.temp_modes = f.temp_modes.leftCols(c.temp);
    t.smf_modes = f.smf_modes.leftCols(c.smf);
    t.nonlin_modes = f.nonlin_modes.leftCols(c.nonlin);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<double> slice(const std::vector<double>& t, Eigen::Index begin, Eigen::Index count) {
  return {t.begin() + begin, t.begin() + begin + count};
}

void fill_initial(ReducedModel& model, const Eigen::VectorXd& z0, const DiffOps& ops) {
  const Eigen::Vector2d x = front_positions(z0.head(model.grid.n()), ops.d1, model.grid.dx());
  model.p0 = x - model.x_ref;
  model.a0 = project_onto(assemble_V(model.frames, model.tail, model.p0), z0);
}

}  // namespace

TrainingRun make_training_run(double beta, std::vector<double> times, Eigen::MatrixXd states) {
  TrainingRun r;
  r.beta = beta;
  r.times = std::move(times);
  r.nonlin = nonlinearity_snapshots(states, beta);
  r.states = std::move(states);
  return r;
}

SamplingRequest covering_request(const SamplingRequest& base, const ActiveSubspace& subspace,
                                 const std::vector<PathTrajectory>& paths) {
  SamplingRequest req = base;
  const Eigen::MatrixXd p = all_paths(paths);
  if (subspace.dim == 1) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double xi = subspace.coordinate(p.col(j));
      req.need_lo = std::min(req.need_lo, xi);
      req.need_hi = std::max(req.need_hi, xi);
    }
    const double lo = std::min(base.lo, req.need_lo), hi = std::max(base.hi, req.need_hi);
    if (lo < base.lo || hi > base.hi) {
      // Extend by whole steps so the configured grid points are kept.
      req.lo = base.lo - std::ceil((base.lo - lo) / base.step) * base.step;
      req.hi = base.hi + std::ceil((hi - base.hi) / base.step) * base.step;
      spdlog::info("training paths span [{:.3f}, {:.3f}]; sampling range extended to [{:.3f}, {:.3f}]", lo, hi,
                   req.lo, req.hi);
    }
  } else {
    req.fallback_ranges.clear();
    for (Eigen::Index f = 0; f < p.rows(); ++f) {
      const double pad = 2 * base.step;
      req.fallback_ranges.push_back({p.row(f).minCoeff() - pad, p.row(f).maxCoeff() + pad});
    }
  }
  return req;
}

SeparatedOffline prepare_separated(const std::vector<TrainingRun>& runs, const Grid1D& grid, const FireParams& params,
                                   const FrameModeCounts& max_counts) {
  require(!runs.empty(), ErrorKind::InvalidInput, "no training runs");
  const DiffOps ops = DiffOps::build(grid);
  const ShiftOperator op{grid, Extrapolation::Constant};
  const Eigen::Index n_x = grid.n();
  SeparatedOffline prep;
  prep.grid = grid;
  prep.params = params;
  prep.z0 = runs.front().states.col(0);

  for (const auto& run : runs) {
    require(run.states.rows() == 2 * n_x, ErrorKind::Dimension, "training states do not match the grid");
    prep.paths.push_back(track_fronts(run.states.topRows(n_x), ops.d1, grid.dx(), run.times));
  }
  prep.x_ref = anchor_reference(prep.paths);
  for (auto& p : prep.paths) {
    reanchor_paths(p, prep.x_ref);
    p = smooth_paths(p, Smoothing{SmoothingMode::FullLinear, 1.0});
  }

  std::vector<std::vector<Eigen::MatrixXd>> temp(2), smf(2), nonlin(2);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& run = runs[k];
    const auto& paths = prep.paths[k].smooth_paths;
    const auto ct = separate_waves(run.states.topRows(n_x), paths, op);
    const auto cs = separate_waves(run.states.bottomRows(n_x), paths, op);
    const auto cf = separate_waves(run.nonlin, paths, op);
    for (int f = 0; f < 2; ++f) {
      temp[f].push_back(ct[f]);
      smf[f].push_back(cs[f]);
      nonlin[f].push_back(cf[f]);
    }
  }
  std::vector<Eigen::MatrixXd> ct, cs, cf;
  for (int f = 0; f < 2; ++f) {
    ct.push_back(hcat(temp[f]));
    cs.push_back(hcat(smf[f]));
    cf.push_back(hcat(nonlin[f]));
  }
  prep.frames = build_frame_bases(ct, cs, cf, max_counts, op);
  prep.subspace = detect_active_subspace(all_paths(prep.paths));
  return prep;
}

ReducedModel finalize_separated(const SeparatedOffline& prep, const FrameModeCounts& counts,
                                const SamplingRequest& sampling) {
  ReducedModel model;
  model.grid = prep.grid;
  model.params = prep.params;
  model.frames = truncate(prep.frames, counts);
  model.x_ref = prep.x_ref;
  const DiffOps ops = DiffOps::build(prep.grid);
  SamplingRequest req = covering_request(sampling, prep.subspace, prep.paths);
  req.alpha = prep.params.alpha;
  req.gamma_s = prep.params.gamma_s;
  model.tables = sample_path_tables(model.frames, model.tail, ops, prep.subspace, req);
  fill_initial(model, prep.z0, ops);
  model.validate();
  return model;
}

ReducedModel build_gaussian_model(const std::vector<TrainingRun>& runs, const Grid1D& grid, const FireParams& params,
                                  const GaussianOptions& opts, const SamplingRequest& sampling,
                                  std::vector<PathTrajectory>* post_paths) {
  require(!runs.empty(), ErrorKind::InvalidInput, "no training runs");
  require(opts.degree >= 0 && opts.degree <= 3, ErrorKind::InvalidInput, "extrapolation degree must lie in [0, 3]");
  const DiffOps ops = DiffOps::build(grid);
  const ShiftOperator op{grid, Extrapolation::Constant};
  const Eigen::Index n_x = grid.n();

  // Split every run at the switching time; the switching column belongs to both phases.
  std::vector<Eigen::Index> first_post;
  for (const auto& run : runs) {
    require(run.states.rows() == 2 * n_x, ErrorKind::Dimension, "training states do not match the grid");
    Eigen::Index j = 0;
    while (j < static_cast<Eigen::Index>(run.times.size()) && run.times[static_cast<std::size_t>(j)] < opts.t_switch - 1e-9)
      ++j;
    require(j + 2 < static_cast<Eigen::Index>(run.times.size()), ErrorKind::InvalidInput,
            "switching time leaves too few post-switch snapshots");
    first_post.push_back(j);
  }

  ReducedModel model;
  model.grid = grid;
  model.params = params;

  {
    std::vector<Eigen::MatrixXd> t_pre, s_pre, f_pre;
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const Eigen::Index cnt = first_post[k] + 1;
      t_pre.push_back(runs[k].states.topRows(n_x).leftCols(cnt));
      s_pre.push_back(runs[k].states.bottomRows(n_x).leftCols(cnt));
      f_pre.push_back(runs[k].nonlin.leftCols(cnt));
    }
    const PodBasis bt = pod(hcat(t_pre), static_cast<std::size_t>(opts.pre_modes));
    const PodBasis bs = pod(hcat(s_pre), static_cast<std::size_t>(opts.pre_modes));
    const PodBasis bf = pod(hcat(f_pre), static_cast<std::size_t>(opts.pre_deim));
    SwitchingStage sw;
    sw.t_switch = opts.t_switch;
    sw.pre = build_pod_rom(bt.modes, bs.modes, bf.modes, ops, params.alpha, params.gamma_s);
    sw.a0_pre = sw.pre.basis.transpose() * runs.front().states.col(0);
    model.switching = std::move(sw);
  }

  // Post-switch paths, anchored at common reference positions.
  std::vector<PathTrajectory> traj;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Eigen::Index b = first_post[k];
    const Eigen::Index cnt = static_cast<Eigen::Index>(runs[k].times.size()) - b;
    traj.push_back(track_fronts(runs[k].states.topRows(n_x).middleCols(b, cnt), ops.d1, grid.dx(),
                                slice(runs[k].times, b, cnt)));
  }
  model.x_ref = anchor_reference(traj);
  for (auto& t : traj) {
    reanchor_paths(t, model.x_ref);
    t = smooth_paths(t, opts.smoothing);
  }

  // Frame modes from the trailing part (ii-b) of the post-switch interval.
  struct Block {
    const char* name;
    double fraction;
    Eigen::Index count;
  };
  const Block blocks[3] = {{"temperature", opts.fraction_temp, opts.counts.temp},
                           {"smf", opts.fraction_smf, opts.counts.smf},
                           {"nonlinearity", opts.fraction_nonlin, opts.counts.nonlin}};
  auto post_data = [&](std::size_t k, int var) -> Eigen::MatrixXd {
    const Eigen::Index b = first_post[k];
    const Eigen::Index cnt = static_cast<Eigen::Index>(runs[k].times.size()) - b;
    if (var == 0) return runs[k].states.topRows(n_x).middleCols(b, cnt);
    if (var == 1) return runs[k].states.bottomRows(n_x).middleCols(b, cnt);
    return runs[k].nonlin.middleCols(b, cnt);
  };
  auto area_start = [&](const PathTrajectory& t, double fraction) {
    const double t0 = t.times.front();
    const double tb = t0 + (1.0 - fraction) * (t.times.back() - t0);
    Eigen::Index j = 0;
    while (j < static_cast<Eigen::Index>(t.times.size()) - 1 && t.times[static_cast<std::size_t>(j)] < tb - 1e-9) ++j;
    return j;
  };

  std::vector<TransformedFrame> frames(2);
  std::vector<Eigen::MatrixXd> residual_blocks[3];
  for (int var = 0; var < 3; ++var) {
    const Block& blk = blocks[var];
    require(blk.fraction > 0 && blk.fraction <= 1, ErrorKind::InvalidInput, "area fraction must lie in (0, 1]");
    std::vector<std::vector<Eigen::MatrixXd>> comoving(2);
    std::vector<std::vector<Eigen::MatrixXd>> per_run(runs.size());
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const Eigen::Index j0 = area_start(traj[k], blk.fraction);
      const Eigen::Index cnt = traj[k].smooth_paths.cols() - j0;
      const Eigen::MatrixXd data = post_data(k, var).middleCols(j0, cnt);
      per_run[k] = separate_waves(data, traj[k].smooth_paths.middleCols(j0, cnt), op);
      for (int f = 0; f < 2; ++f) comoving[f].push_back(per_run[k][f]);
    }
    Eigen::MatrixXd modes[2];
    for (int f = 0; f < 2; ++f)
      modes[f] = blk.count > 0 ? pod(hcat(comoving[f]), static_cast<std::size_t>(blk.count)).modes
                               : Eigen::MatrixXd(n_x, 0);
    for (int f = 0; f < 2; ++f) {
      frames[f].shift_op = op;
      if (var == 0) frames[f].temp_modes = modes[f];
      if (var == 1) frames[f].smf_modes = modes[f];
      if (var == 2) frames[f].nonlin_modes = modes[f];
    }

    // Travelling-wave part over the whole post-switch interval: projected
    // coefficients on (ii-b), polynomial extrapolation on (ii-a).
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const Eigen::MatrixXd data = post_data(k, var);
      const PathTrajectory& t = traj[k];
      const Eigen::Index j0 = area_start(t, blk.fraction);
      Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(n_x, data.cols());
      if (blk.count > 0) {
        for (int f = 0; f < 2; ++f) {
          const Eigen::MatrixXd coef_b = modes[f].transpose() * per_run[k][f];
          Eigen::MatrixXd coef(blk.count, data.cols());
          coef.rightCols(coef_b.cols()) = coef_b;
          if (j0 > 0) {
            const std::vector<double> fit_t = slice(t.times, j0, coef_b.cols());
            coef.leftCols(j0) = extrapolate_coefficients(fit_t, coef_b, opts.degree, slice(t.times, 0, j0));
          }
          for (Eigen::Index j = 0; j < data.cols(); ++j)
            recon.col(j) += shift_apply(op, Eigen::VectorXd(modes[f] * coef.col(j)), t.smooth_paths(f, j));
        }
      }
      residual_blocks[var].push_back(data - recon);
    }
  }

  const Eigen::Index tail_counts[3] = {opts.tail_modes, opts.tail_modes, opts.tail_nonlin};
  Eigen::MatrixXd tail_modes[3];
  for (int var = 0; var < 3; ++var) {
    const Eigen::MatrixXd res = hcat(residual_blocks[var]);
    tail_modes[var] = residual_pod(res, Eigen::MatrixXd::Zero(res.rows(), res.cols()),
                                   static_cast<std::size_t>(tail_counts[var])).modes;
    spdlog::debug("{} residual energy {:.3e}", blocks[var].name, res.squaredNorm());
  }
  model.frames = std::move(frames);
  model.tail.temp_modes = tail_modes[0];
  model.tail.smf_modes = tail_modes[1];
  model.tail.nonlin_modes = tail_modes[2];

  const ActiveSubspace subspace = detect_active_subspace(all_paths(traj));
  SamplingRequest req = covering_request(sampling, subspace, traj);
  req.alpha = params.alpha;
  req.gamma_s = params.gamma_s;
  model.tables = sample_path_tables(model.frames, model.tail, ops, subspace, req);
  model.a0 = Eigen::VectorXd::Zero(model.reduced_dim());
  model.p0 = Eigen::VectorXd::Zero(model.paths());
  model.validate();
  if (post_paths) *post_paths = std::move(traj);
  return model;
}

PodModel build_pod_model(const std::vector<TrainingRun>& runs, const Grid1D& grid, const FireParams& params,
                         Eigen::Index r_var, Eigen::Index m) {
  require(!runs.empty(), ErrorKind::InvalidInput, "no training runs");
  const Eigen::Index n_x = grid.n();
  std::vector<Eigen::MatrixXd> t, s, f;
  for (const auto& run : runs) {
    t.push_back(run.states.topRows(n_x));
    s.push_back(run.states.bottomRows(n_x));
    f.push_back(run.nonlin);
  }
  const DiffOps ops = DiffOps::build(grid);
  PodModel pm;
  pm.rom = build_pod_rom(pod(hcat(t), static_cast<std::size_t>(r_var)).modes,
                         pod(hcat(s), static_cast<std::size_t>(r_var)).modes,
                         pod(hcat(f), static_cast<std::size_t>(m)).modes, ops, params.alpha, params.gamma_s);
  pm.a0 = pm.rom.basis.transpose() * runs.front().states.col(0);
  return pm;
}

Eigen::Vector2d offline_error(const ReducedModel& model, const TrainingRun& run, const PathTrajectory& paths) {
  const Eigen::Index s = run.states.cols();
  Eigen::MatrixXd approx(run.states.rows(), s);
  const Eigen::Index offset = s - paths.smooth_paths.cols();
  require(offset >= 0, ErrorKind::Dimension, "paths longer than the run");
  for (Eigen::Index j = 0; j < s; ++j) {
    const Eigen::VectorXd z = run.states.col(j);
    if (j < offset || (model.switching && j == offset)) {
      require(model.switching.has_value(), ErrorKind::Dimension, "paths do not cover the run");
      const Eigen::MatrixXd& b = model.switching->pre.basis;
      approx.col(j) = b * (b.transpose() * z);
    } else {
      const Eigen::MatrixXd v = assemble_V(model.frames, model.tail, paths.smooth_paths.col(j - offset));
      approx.col(j) = v * project_onto(v, z);
    }
  }
  return relative_l2_error_blocks(run.states, approx, run.times);
}

}  // namespace smor
