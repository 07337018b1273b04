// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/fom.hpp"

#include "smor/core/errors.hpp"
#include "smor/core/snapshot_io.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <sstream>
#include <vector>

namespace smor {

Grid1D Grid1D::make(double length_m, std::size_t n_x) {
  Grid1D g;
  g.length_m = length_m;
  g.n_x = n_x;
  g.periodic = true;
  g.validate();
  return g;
}

Eigen::VectorXd Grid1D::nodes() const {
  Eigen::VectorXd x(n());
  for (std::size_t i = 0; i < n_x; ++i) x(static_cast<Eigen::Index>(i)) = node(i);
  return x;
}

void Grid1D::validate() const {
  require(std::isfinite(length_m) && length_m > 0, ErrorKind::InvalidInput, "grid length must be positive");
  require(n_x >= 8, ErrorKind::InvalidInput, "grid needs at least 8 intervals");
}

void FireParams::validate() const {
  for (double c : {k, v, alpha, beta, gamma, gamma_s, t_ambient})
    require(std::isfinite(c), ErrorKind::InvalidInput, "fire parameters must be finite");
  require(k >= 0, ErrorKind::InvalidInput, "k must be non-negative");
  require(gamma_s >= 0, ErrorKind::InvalidInput, "gamma_s must be non-negative");
  require(beta > 0, ErrorKind::InvalidInput, "beta must be positive");
}

Eigen::VectorXd FullState::stacked() const {
  require(temp_rel.size() == smf.size(), ErrorKind::Dimension, "state blocks differ in length");
  Eigen::VectorXd z(2 * temp_rel.size());
  z << temp_rel, smf;
  return z;
}

FullState FullState::from_stacked(const Eigen::VectorXd& z) {
  require(z.size() % 2 == 0, ErrorKind::Dimension, "stacked state must have even length");
  const Eigen::Index n = z.size() / 2;
  return {z.head(n), z.tail(n)};
}

namespace {

constexpr double kD1[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr double kD2[7] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
// One-sided closures on nodes 0..6, evaluated at node 0, 1, 2.
constexpr double kD1Boundary[3][7] = {
    {-49.0 / 20, 6.0, -15.0 / 2, 20.0 / 3, -15.0 / 4, 6.0 / 5, -1.0 / 6},
    {-1.0 / 6, -77.0 / 60, 5.0 / 2, -5.0 / 3, 5.0 / 6, -1.0 / 4, 1.0 / 30},
    {1.0 / 30, -2.0 / 5, -7.0 / 12, 4.0 / 3, -1.0 / 2, 2.0 / 15, -1.0 / 60},
};

SparseMatrix periodic_stencil(Eigen::Index n, const double (&w)[7], double scale) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(7 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int o = -3; o <= 3; ++o) {
      const double c = w[o + 3];
      if (c == 0.0) continue;
      const Eigen::Index j = ((i + o) % n + n) % n;
      trip.emplace_back(i, j, c * scale);
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix onesided_d1(Eigen::Index n, double inv_dx) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(7 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i < 3) {
      for (int j = 0; j < 7; ++j) trip.emplace_back(i, j, kD1Boundary[i][j] * inv_dx);
    } else if (i >= n - 3) {
      // Mirror of the left closure: d/dx flips sign under reflection.
      const Eigen::Index r = n - 1 - i;
      for (int j = 0; j < 7; ++j) trip.emplace_back(i, n - 1 - j, -kD1Boundary[r][j] * inv_dx);
    } else {
      for (int o = -3; o <= 3; ++o)
        if (kD1[o + 3] != 0.0) trip.emplace_back(i, i + o, kD1[o + 3] * inv_dx);
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

DiffOps DiffOps::build(const Grid1D& grid) {
  grid.validate();
  const double dx = grid.dx();
  DiffOps ops;
  ops.d1 = periodic_stencil(grid.n(), kD1, 1.0 / dx);
  ops.d2 = periodic_stencil(grid.n(), kD2, 1.0 / (dx * dx));
  ops.d1_onesided = onesided_d1(grid.n(), 1.0 / dx);
  return ops;
}

Eigen::MatrixXd apply_affine_block(const DiffOps& ops, AffineChannel channel, const Eigen::MatrixXd& x) {
  require(x.rows() == ops.n(), ErrorKind::Dimension, "affine block applied to wrong row count");
  switch (channel) {
    case AffineChannel::Diffusion: return ops.d2 * x;
    case AffineChannel::Advection: return -(ops.d1 * x);
    case AffineChannel::Loss: return -x;
  }
  return x;
}

Eigen::MatrixXd assemble_affine_dense(const DiffOps& ops, AffineChannel channel) {
  const Eigen::Index n = ops.n();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topLeftCorner(n, n) = apply_affine_block(ops, channel, Eigen::MatrixXd::Identity(n, n));
  return a;
}

Eigen::VectorXd arrhenius_rate(const Eigen::Ref<const Eigen::VectorXd>& temp_rel, double beta) {
  require(beta > 0, ErrorKind::InvalidInput, "beta must be positive");
  require(temp_rel.allFinite(), ErrorKind::InvalidInput, "non-finite temperature");
  Eigen::VectorXd r(temp_rel.size());
  for (Eigen::Index i = 0; i < temp_rel.size(); ++i) r(i) = reaction(1.0, temp_rel(i), beta);
  return r;
}

Eigen::VectorXd nonlinearity_f(const Eigen::Ref<const Eigen::VectorXd>& smf,
                               const Eigen::Ref<const Eigen::VectorXd>& temp_rel, double beta) {
  require(smf.size() == temp_rel.size(), ErrorKind::Dimension, "smf and temperature differ in length");
  require(beta > 0, ErrorKind::InvalidInput, "beta must be positive");
  require(temp_rel.allFinite() && smf.allFinite(), ErrorKind::InvalidInput, "non-finite state");
  Eigen::VectorXd f(smf.size());
  for (Eigen::Index i = 0; i < smf.size(); ++i) f(i) = reaction(smf(i), temp_rel(i), beta);
  return f;
}

void fom_rhs(const Eigen::VectorXd& z, const FireParams& params, const DiffOps& ops, Eigen::VectorXd& dz) {
  const Eigen::Index n = ops.n();
  require(z.size() == 2 * n, ErrorKind::Dimension, "state length does not match operators");
  dz.resize(2 * n);
  const auto temp = z.head(n);
  const auto smf = z.tail(n);
  auto dtemp = dz.head(n);
  auto dsmf = dz.tail(n);

  dtemp.noalias() = params.k * (ops.d2 * temp);
  if (params.v != 0.0) dtemp.noalias() -= params.v * (ops.d1 * temp);
  const double loss = params.alpha * params.gamma;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double f = reaction(smf(i), temp(i), params.beta);
    dtemp(i) += params.alpha * f - loss * temp(i);
    dsmf(i) = -params.gamma_s * f;
  }
}

FullState fom_rhs(const FullState& state, const FireParams& params, const DiffOps& ops) {
  const Eigen::VectorXd z = state.stacked();
  Eigen::VectorXd dz(z.size());
  fom_rhs(z, params, ops, dz);
  return FullState::from_stacked(dz);
}

Eigen::MatrixXd nonlinearity_snapshots(const Eigen::MatrixXd& states, double beta) {
  require(states.rows() % 2 == 0, ErrorKind::Dimension, "stacked states must have even row count");
  const Eigen::Index n = states.rows() / 2;
  Eigen::MatrixXd f(n, states.cols());
  for (Eigen::Index j = 0; j < states.cols(); ++j)
    for (Eigen::Index i = 0; i < n; ++i) f(i, j) = reaction(states(n + i, j), states(i, j), beta);
  return f;
}

FullState initial_condition_gaussian(const Grid1D& grid) {
  grid.validate();
  FullState s;
  s.temp_rel.resize(grid.n());
  s.smf = Eigen::VectorXd::Ones(grid.n());
  for (std::size_t i = 0; i < grid.n_x; ++i) {
    const double x = grid.node(i);
    s.temp_rel(static_cast<Eigen::Index>(i)) = 1200.0 * std::exp(-(x - 500.0) * (x - 500.0) / 200.0);
  }
  return s;
}

OdeSolution run_fom(const FireParams& params, const Grid1D& grid, const Eigen::VectorXd& z0, double t0, double tf,
                    std::span<const double> output_times, const IntegratorConfig& cfg) {
  params.validate();
  const DiffOps ops = DiffOps::build(grid);
  require(z0.size() == 2 * grid.n(), ErrorKind::Dimension, "initial state does not match grid");
  auto rhs = [&](double, const Eigen::VectorXd& z, Eigen::VectorXd& dz) { fom_rhs(z, params, ops, dz); };
  return solve_ivp(rhs, z0, t0, tf, output_times, cfg);
}

FullState initial_condition_separated(const FireParams& params, const Grid1D& grid, const IntegratorConfig& cfg,
                                      const std::filesystem::path& cache_dir) {
  std::filesystem::path cache;
  if (!cache_dir.empty()) {
    std::ostringstream name;
    name << "separated_ic_nx" << grid.n_x << "_beta" << kSeparatedIcBeta << "_t" << kSeparatedIcTime << ".smor";
    cache = cache_dir / name.str();
    if (std::filesystem::exists(cache)) {
      const Eigen::MatrixXd m = io::read_matrix(cache);
      if (m.rows() == 2 * grid.n() && m.cols() == 1) return FullState::from_stacked(m.col(0));
      spdlog::warn("ignoring stale separated-waves cache {}", cache.string());
    }
  }
  FireParams p = params;
  p.beta = kSeparatedIcBeta;
  const Eigen::VectorXd z0 = initial_condition_gaussian(grid).stacked();
  const double out[] = {kSeparatedIcTime};
  const OdeSolution sol = run_fom(p, grid, z0, 0.0, kSeparatedIcTime, out, cfg);
  const Eigen::VectorXd z = sol.states.col(0);
  if (!cache.empty()) io::write_matrix(cache, z);
  return FullState::from_stacked(z);
}

}  // namespace smor
