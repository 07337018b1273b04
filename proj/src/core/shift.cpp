// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/shift.hpp"

#include "smor/core/errors.hpp"

#include <cmath>

namespace smor {
namespace {

struct Stencil {
  Eigen::Index offset = 0;      // source base index = i - offset
  std::array<double, 4> w{};    // weights for base-1 .. base+2
};

Stencil make_stencil(double p, double dx) {
  require(std::isfinite(p), ErrorKind::InvalidInput, "shift amount must be finite");
  double shift = p / dx;
  const double nearest = std::round(shift);
  // Snap shifts that are integers up to rounding so that whole-cell shifts are exact.
  if (std::abs(shift - nearest) < 1e-12 * std::max(1.0, std::abs(shift))) shift = nearest;
  // s = i - shift; base = floor(s) = i - ceil(shift); t = s - base.
  const double c = std::ceil(shift);
  const double t = c - shift;
  Stencil st;
  st.offset = static_cast<Eigen::Index>(c);
  st.w = {-t * (t - 1) * (t - 2) / 6.0, (t + 1) * (t - 1) * (t - 2) / 2.0, -(t + 1) * t * (t - 2) / 2.0,
          (t + 1) * t * (t - 1) / 6.0};
  if (t == 0.0) st.w = {0.0, 1.0, 0.0, 0.0};
  return st;
}

Eigen::MatrixXd apply_stencil(const Stencil& st, Extrapolation ex, const Eigen::MatrixXd& modes) {
  const Eigen::Index n = modes.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, modes.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index base = i - st.offset;
    for (int k = 0; k < 4; ++k) {
      const double w = st.w[static_cast<std::size_t>(k)];
      if (w == 0.0) continue;
      Eigen::Index src = base - 1 + k;
      if (src < 0 || src >= n) {
        switch (ex) {
          case Extrapolation::Zero: continue;
          case Extrapolation::Constant: src = src < 0 ? 0 : n - 1; break;
          case Extrapolation::Periodic: src = ((src % n) + n) % n; break;
        }
      }
      out.row(i) += w * modes.row(src);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd shift_apply(const ShiftOperator& op, const Eigen::MatrixXd& modes, double p) {
  require(modes.rows() == op.grid.n(), ErrorKind::Dimension, "mode length differs from grid size");
  return apply_stencil(make_stencil(p, op.grid.dx()), op.extrapolation, modes);
}

Eigen::VectorXd shift_apply(const ShiftOperator& op, const Eigen::VectorXd& mode, double p) {
  return shift_apply(op, Eigen::MatrixXd(mode), p).col(0);
}

Eigen::MatrixXd shift_derivative_apply(const ShiftOperator& op, const Eigen::MatrixXd& modes, double p,
                                       const SparseMatrix& d1_onesided) {
  require(modes.rows() == op.grid.n() && d1_onesided.rows() == op.grid.n(), ErrorKind::Dimension,
          "mode length differs from grid size");
  const Eigen::MatrixXd minus_d = -(d1_onesided * modes);
  return apply_stencil(make_stencil(p, op.grid.dx()), Extrapolation::Zero, minus_d);
}

Eigen::VectorXd shift_derivative_apply(const ShiftOperator& op, const Eigen::VectorXd& mode, double p,
                                       const SparseMatrix& d1_onesided) {
  return shift_derivative_apply(op, Eigen::MatrixXd(mode), p, d1_onesided).col(0);
}

ModeLayout ModeLayout::of(const std::vector<TransformedFrame>& frames, const PodTail& tail) {
  ModeLayout l;
  Eigen::Index c = 0;
  for (const auto& f : frames) {
    l.frame_begin.push_back(c);
    l.frame_size.push_back(f.state_modes());
    c += f.state_modes();
    l.nonlin_total += f.nonlin_modes.cols();
  }
  l.pod_begin = c;
  l.pod_size = tail.state_modes();
  l.nonlin_total += tail.nonlin_modes.cols();
  return l;
}

namespace {

Eigen::Index check_rows(const std::vector<TransformedFrame>& frames, const PodTail& tail, const Eigen::VectorXd& p) {
  require(p.size() == static_cast<Eigen::Index>(frames.size()), ErrorKind::Dimension,
          "path vector length differs from frame count");
  Eigen::Index n_x = -1;
  auto check = [&](const Eigen::MatrixXd& m) {
    if (m.cols() == 0) return;
    if (n_x < 0) n_x = m.rows();
    require(m.rows() == n_x, ErrorKind::Dimension, "mode blocks have inconsistent row counts");
  };
  for (const auto& f : frames) {
    check(f.temp_modes);
    check(f.smf_modes);
    check(f.nonlin_modes);
  }
  check(tail.temp_modes);
  check(tail.smf_modes);
  check(tail.nonlin_modes);
  require(n_x > 0, ErrorKind::Dimension, "no modes to assemble");
  return n_x;
}

}  // namespace

FrameMatrices assemble_V_W(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                           const Eigen::VectorXd& p, const SparseMatrix& d1_onesided) {
  const Eigen::Index n_x = check_rows(frames, tail, p);
  const ModeLayout layout = ModeLayout::of(frames, tail);
  FrameMatrices out;
  out.v = Eigen::MatrixXd::Zero(2 * n_x, layout.total());
  out.w = Eigen::MatrixXd::Zero(2 * n_x, layout.total());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& fr = frames[f];
    const double pf = p(static_cast<Eigen::Index>(f));
    const Eigen::Index c0 = layout.frame_begin[f];
    const Eigen::Index rt = fr.temp_modes.cols();
    const Eigen::Index rs = fr.smf_modes.cols();
    if (rt > 0) {
      out.v.block(0, c0, n_x, rt) = shift_apply(fr.shift_op, fr.temp_modes, pf);
      out.w.block(0, c0, n_x, rt) = shift_derivative_apply(fr.shift_op, fr.temp_modes, pf, d1_onesided);
    }
    if (rs > 0) {
      out.v.block(n_x, c0 + rt, n_x, rs) = shift_apply(fr.shift_op, fr.smf_modes, pf);
      out.w.block(n_x, c0 + rt, n_x, rs) = shift_derivative_apply(fr.shift_op, fr.smf_modes, pf, d1_onesided);
    }
  }
  const Eigen::Index pt = tail.temp_modes.cols();
  if (pt > 0) out.v.block(0, layout.pod_begin, n_x, pt) = tail.temp_modes;
  if (tail.smf_modes.cols() > 0)
    out.v.block(n_x, layout.pod_begin + pt, n_x, tail.smf_modes.cols()) = tail.smf_modes;
  return out;
}

Eigen::MatrixXd assemble_V(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                           const Eigen::VectorXd& p) {
  const Eigen::Index n_x = check_rows(frames, tail, p);
  const ModeLayout layout = ModeLayout::of(frames, tail);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * n_x, layout.total());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& fr = frames[f];
    const double pf = p(static_cast<Eigen::Index>(f));
    const Eigen::Index c0 = layout.frame_begin[f];
    const Eigen::Index rt = fr.temp_modes.cols();
    if (rt > 0) v.block(0, c0, n_x, rt) = shift_apply(fr.shift_op, fr.temp_modes, pf);
    if (fr.smf_modes.cols() > 0)
      v.block(n_x, c0 + rt, n_x, fr.smf_modes.cols()) = shift_apply(fr.shift_op, fr.smf_modes, pf);
  }
  const Eigen::Index pt = tail.temp_modes.cols();
  if (pt > 0) v.block(0, layout.pod_begin, n_x, pt) = tail.temp_modes;
  if (tail.smf_modes.cols() > 0) v.block(n_x, layout.pod_begin + pt, n_x, tail.smf_modes.cols()) = tail.smf_modes;
  return v;
}

Eigen::MatrixXd assemble_U(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                           const Eigen::VectorXd& p) {
  const Eigen::Index n_x = check_rows(frames, tail, p);
  const ModeLayout layout = ModeLayout::of(frames, tail);
  Eigen::MatrixXd u(n_x, layout.nonlin_total);
  Eigen::Index c = 0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& fr = frames[f];
    const Eigen::Index m = fr.nonlin_modes.cols();
    if (m > 0) u.middleCols(c, m) = shift_apply(fr.shift_op, fr.nonlin_modes, p(static_cast<Eigen::Index>(f)));
    c += m;
  }
  if (tail.nonlin_modes.cols() > 0) u.middleCols(c, tail.nonlin_modes.cols()) = tail.nonlin_modes;
  return u;
}

Eigen::MatrixXd coefficient_arrangement(const ModeLayout& layout, const Eigen::VectorXd& a_hat) {
  require(a_hat.size() == layout.total(), ErrorKind::Dimension, "coefficient vector length differs from layout");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(layout.total(), layout.frames());
  for (Eigen::Index f = 0; f < layout.frames(); ++f) {
    const auto b = layout.frame_begin[static_cast<std::size_t>(f)];
    const auto s = layout.frame_size[static_cast<std::size_t>(f)];
    d.block(b, f, s, 1) = a_hat.segment(b, s);
  }
  return d;
}

}  // namespace smor
