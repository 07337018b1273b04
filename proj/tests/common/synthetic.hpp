// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Small hand-built reduced models shared by the unit and acceptance tests.

#pragma once

#include "smor/core/path_tables.hpp"
#include "smor/core/rom.hpp"

#include <cmath>

namespace smor::synthetic {

// Single-frame model for pure transport of a smooth profile: dT/dt = -c dT/dx,
// no reaction, one transformed temperature mode.
struct AdvectionCase {
  ReducedModel model;
  FireParams params;
  double speed = 0.0;
  double amplitude = 0.0;
};

inline AdvectionCase make_advection(double speed, double length = 100.0, std::size_t n_x = 400, double center = 30.0,
                                    double width = 5.0, double p_max = 45.0) {
  AdvectionCase ac;
  ac.speed = speed;
  ac.params.k = 0.0;
  ac.params.v = speed;
  ac.params.gamma = 0.0;

  ReducedModel& m = ac.model;
  m.grid = Grid1D::make(length, n_x);
  m.params = ac.params;
  const Eigen::VectorXd x = m.grid.nodes();
  const Eigen::VectorXd profile = (-((x.array() - center) / width).square()).exp();
  ac.amplitude = profile.norm();

  TransformedFrame f;
  f.shift_op = {m.grid, Extrapolation::Constant};
  f.temp_modes = profile / ac.amplitude;
  f.smf_modes.resize(m.grid.n(), 0);
  f.nonlin_modes.resize(m.grid.n(), 0);
  m.frames.push_back(f);

  ActiveSubspace sub;
  sub.direction = Eigen::VectorXd::Ones(1);
  sub.singular_values = Eigen::VectorXd::Ones(1);
  SamplingRequest req;
  req.lo = -5.0;
  req.hi = p_max;
  req.step = m.grid.dx();
  req.alpha = m.params.alpha;
  req.gamma_s = m.params.gamma_s;
  m.tables = sample_path_tables(m.frames, m.tail, DiffOps::build(m.grid), sub, req);
  m.a0 = Eigen::VectorXd::Constant(1, ac.amplitude);
  m.p0 = Eigen::VectorXd::Zero(1);
  m.x_ref = Eigen::VectorXd::Constant(1, center);
  m.validate();
  return ac;
}

inline Eigen::MatrixXd bump_modes(const Grid1D& g, double center, int count) {
  const Eigen::VectorXd x = g.nodes();
  Eigen::MatrixXd m(g.n(), count);
  for (int k = 0; k < count; ++k)
    m.col(k) = (-((x.array() - center) / (4.0 + k)).square()).exp() * (x.array() - center).pow(k);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(g.n(), count);
}

// Two mirrored frames with two temperature, two smf and two nonlinearity
// modes each, optionally followed by a one-mode POD tail.
inline ReducedModel two_frame_model(bool with_tail) {
  ReducedModel m;
  m.grid = Grid1D::make(100.0, 200);
  const ShiftOperator op{m.grid, Extrapolation::Constant};
  for (double c : {70.0, 30.0}) {
    TransformedFrame f;
    f.shift_op = op;
    f.temp_modes = bump_modes(m.grid, c, 2);
    f.smf_modes = bump_modes(m.grid, c + 3.0, 2);
    f.nonlin_modes = bump_modes(m.grid, c - 1.0, 2);
    m.frames.push_back(f);
  }
  if (with_tail) {
    m.tail.temp_modes = bump_modes(m.grid, 50.0, 1);
    m.tail.smf_modes = bump_modes(m.grid, 50.0, 1);
    m.tail.nonlin_modes = bump_modes(m.grid, 50.0, 1);
  }
  ActiveSubspace sub;
  sub.direction = Eigen::Vector2d(1.0, -1.0);
  sub.singular_values = Eigen::Vector2d(1.0, 0.0);
  SamplingRequest req;
  req.lo = 0;
  req.hi = 10;
  req.step = 0.5;
  m.tables = sample_path_tables(m.frames, m.tail, DiffOps::build(m.grid), sub, req);
  m.x_ref = Eigen::Vector2d(70.0, 30.0);
  m.a0 = Eigen::VectorXd::Zero(m.reduced_dim());
  m.p0 = Eigen::VectorXd::Zero(2);
  m.validate();
  return m;
}

}  // namespace smor::synthetic
