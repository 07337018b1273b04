// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/decomp.hpp"

#include "smor/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace smor {
namespace {

// Above this min(n, s) a full bidiagonalization dominates the offline stage
// on one core; a randomized subspace iteration is used for the leading modes.
constexpr Eigen::Index kDirectSvdLimit = 1600;

void fix_signs(Eigen::MatrixXd& modes) {
  for (Eigen::Index j = 0; j < modes.cols(); ++j) {
    Eigen::Index imax = 0;
    modes.col(j).cwiseAbs().maxCoeff(&imax);
    if (modes(imax, j) < 0) modes.col(j) *= -1.0;
  }
}

struct Svd {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
};

Svd svd_direct(const Eigen::MatrixXd& x) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
  require(svd.info() == Eigen::Success, ErrorKind::LinearSolve, "SVD did not converge");
  return {svd.matrixU(), svd.singularValues()};
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

// Leading r triplets by block power iteration with Rayleigh-Ritz extraction.
// Returns an empty result if the residual test fails after the iteration cap.
Svd svd_subspace(const Eigen::MatrixXd& x, Eigen::Index r) {
  const Eigen::Index b = std::min<Eigen::Index>(std::min(x.rows(), x.cols()), r + std::max<Eigen::Index>(10, r / 2));
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd omega(x.cols(), b);
  for (Eigen::Index k = 0; k < omega.size(); ++k) omega.data()[k] = normal(rng);
  Eigen::MatrixXd q = orthonormalize(x * omega);
  for (int it = 0; it < 40; ++it) {
    q = orthonormalize(x * orthonormalize(x.transpose() * q));
    if (it < 3) continue;
    const Eigen::MatrixXd small = q.transpose() * x;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(small, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::MatrixXd u = q * svd.matrixU().leftCols(r);
    const Eigen::VectorXd s = svd.singularValues().head(r);
    // || X^T u_i - s_i v_i || relative to s_1, with v_i = X^T u_i / s_i.
    const Eigen::MatrixXd xtu = x.transpose() * u;
    const Eigen::MatrixXd back = x * xtu;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) worst = std::max(worst, (back.col(i) - s(i) * s(i) * u.col(i)).norm());
    if (worst <= 1e-12 * s(0) * s(0)) return {u, s};
  }
  return {};
}

}  // namespace

PodBasis pod(const Eigen::MatrixXd& snapshots, std::size_t r) {
  require(snapshots.size() > 0, ErrorKind::InvalidInput, "empty snapshot matrix");
  require(snapshots.allFinite(), ErrorKind::InvalidInput, "non-finite snapshot entries");
  const Eigen::Index rank = static_cast<Eigen::Index>(r);
  const Eigen::Index kmax = std::min(snapshots.rows(), snapshots.cols());
  require(rank <= kmax, ErrorKind::InvalidInput, "requested POD rank exceeds min(n, s)");
  PodBasis out;
  const double total = snapshots.squaredNorm();
  if (rank == 0) {
    out.modes.resize(snapshots.rows(), 0);
    return out;
  }
  Svd svd;
  if (kmax > kDirectSvdLimit && rank * 4 <= kmax) svd = svd_subspace(snapshots, rank);
  if (svd.s.size() == 0) svd = svd_direct(snapshots);
  out.modes = svd.u.leftCols(rank);
  out.singular_values = svd.s.head(rank);
  out.energy_captured = total > 0 ? std::min(1.0, out.singular_values.squaredNorm() / total) : 0.0;
  fix_signs(out.modes);
  return out;
}

PodBasis pod_energy(const Eigen::MatrixXd& snapshots, double threshold) {
  require(snapshots.size() > 0, ErrorKind::InvalidInput, "empty snapshot matrix");
  require(threshold > 0 && threshold <= 1, ErrorKind::InvalidInput, "energy threshold must lie in (0, 1]");
  require(snapshots.allFinite(), ErrorKind::InvalidInput, "non-finite snapshot entries");
  const Svd svd = svd_direct(snapshots);
  const double total = svd.s.squaredNorm();
  require(total > 0, ErrorKind::InvalidInput, "snapshot matrix has zero energy");
  Eigen::Index r = 0;
  double acc = 0;
  while (r < svd.s.size()) {
    acc += svd.s(r) * svd.s(r);
    ++r;
    if (acc / total >= threshold * (1 - 1e-14)) break;
  }
  PodBasis out;
  out.modes = svd.u.leftCols(r);
  out.singular_values = svd.s.head(r);
  out.energy_captured = std::min(1.0, acc / total);
  fix_signs(out.modes);
  return out;
}

PointSelection qdeim_points(const Eigen::MatrixXd& basis) {
  const Eigen::Index m = basis.cols();
  require(m > 0 && m <= basis.rows(), ErrorKind::Selection, "DEIM basis must have 1..n columns");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis.transpose());
  const auto& r = qr.matrixR();
  const double r00 = std::abs(r(0, 0));
  require(r00 > 0 && std::abs(r(m - 1, m - 1)) > 1e-12 * r00, ErrorKind::Selection,
          "DEIM basis is numerically rank deficient");
  PointSelection sel;
  sel.indices.resize(static_cast<std::size_t>(m));
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index i = 0; i < m; ++i) sel.indices[static_cast<std::size_t>(i)] = perm(i);
  return sel;
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& x, const PointSelection& sel) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(sel.size()), x.cols());
  for (std::size_t i = 0; i < sel.size(); ++i) {
    const Eigen::Index row = sel.indices[i];
    require(row >= 0 && row < x.rows(), ErrorKind::Dimension, "selection index out of range");
    out.row(static_cast<Eigen::Index>(i)) = x.row(row);
  }
  return out;
}

double inverse_condition(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  return s(0) > 0 ? s(s.size() - 1) / s(0) : 0.0;
}

Eigen::MatrixXd deim_inverse(const Eigen::MatrixXd& basis, const PointSelection& sel) {
  require(static_cast<Eigen::Index>(sel.size()) == basis.cols(), ErrorKind::Dimension,
          "selection size differs from DEIM basis width");
  const Eigen::MatrixXd st_u = gather_rows(basis, sel);
  require(inverse_condition(st_u) >= 1e-12, ErrorKind::LinearSolve, "S^T U is numerically singular");
  return st_u.partialPivLu().inverse();
}

Eigen::VectorXd deim_apply(const Eigen::MatrixXd& basis, const PointSelection& sel,
                           const Eigen::VectorXd& f_at_points) {
  require(f_at_points.size() == basis.cols(), ErrorKind::Dimension, "f_at_points length differs from basis width");
  const Eigen::MatrixXd st_u = gather_rows(basis, sel);
  require(inverse_condition(st_u) >= 1e-12, ErrorKind::LinearSolve, "S^T U is numerically singular");
  return basis * st_u.partialPivLu().solve(f_at_points);
}

}  // namespace smor
