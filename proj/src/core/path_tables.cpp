// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/path_tables.hpp"

#include "smor/core/decomp.hpp"
#include "smor/core/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iterator>
#include <numeric>
#include <string>
#include <thread>

namespace smor {

double ActiveSubspace::coordinate(const Eigen::VectorXd& p) const {
  require(p.size() == direction.size(), ErrorKind::Dimension, "path vector length differs from subspace");
  return direction.dot(p) / direction.squaredNorm();
}

ActiveSubspace detect_active_subspace(const Eigen::MatrixXd& paths, double rel_tol) {
  require(paths.rows() >= 1 && paths.cols() >= 1, ErrorKind::InvalidInput, "empty path matrix");
  ActiveSubspace s;
  const Eigen::Index q = paths.rows();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(paths, Eigen::ComputeThinU);
  s.singular_values = svd.singularValues();
  if (q == 1) {
    s.direction = Eigen::VectorXd::Ones(1);
    return s;
  }
  const double s1 = s.singular_values(0);
  const Eigen::VectorXd u1 = svd.matrixU().col(0);
  const bool low_rank = s1 > 0 && s.singular_values(1) < rel_tol * s1;
  if (low_rank && std::abs(u1(0)) > 1e-12) {
    s.direction = u1 / u1(0);
    return s;
  }
  s.dim = 2;
  s.direction = Eigen::VectorXd::Unit(q, 0);
  spdlog::warn("paths do not lie on a one-dimensional subspace (sigma2/sigma1 = {:.3e}); sampling a tensor grid",
               s1 > 0 ? s.singular_values(1) / s1 : 0.0);
  return s;
}

Eigen::Index SampleAxis::nearest(double x, bool* clamped) const {
  const double k = std::ceil((x - origin) / step - 0.5);
  const bool out = !(k >= 0 && k <= static_cast<double>(count - 1));
  if (clamped) *clamped = out;
  if (!out) return static_cast<Eigen::Index>(k);
  return k < 0 || std::isnan(k) ? 0 : count - 1;
}

SampleAxis SampleAxis::covering(double lo, double hi, double step) {
  require(step > 0 && std::isfinite(step), ErrorKind::InvalidInput, "sampling step must be positive");
  require(hi >= lo, ErrorKind::InvalidInput, "sampling range is empty");
  SampleAxis a;
  a.origin = lo;
  a.step = step;
  a.count = static_cast<Eigen::Index>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (a.end() < hi - 1e-9 * std::max(1.0, std::abs(hi))) ++a.count;
  return a;
}

std::size_t PathTables::locate(const Eigen::VectorXd& p, bool* clamped) const {
  if (subspace.dim == 1) return static_cast<std::size_t>(axes.at(0).nearest(subspace.coordinate(p), clamped));
  require(p.size() == static_cast<Eigen::Index>(axes.size()), ErrorKind::Dimension, "path length differs from grid");
  std::size_t flat = 0;
  std::size_t stride = 1;
  bool any = false;
  for (std::size_t d = 0; d < axes.size(); ++d) {
    bool c = false;
    flat += stride * static_cast<std::size_t>(axes[d].nearest(p(static_cast<Eigen::Index>(d)), &c));
    stride *= static_cast<std::size_t>(axes[d].count);
    any = any || c;
  }
  if (clamped) *clamped = any;
  return flat;
}

Eigen::VectorXd PathTables::sample_point(std::size_t k) const {
  if (subspace.dim == 1) return subspace.point(axes.at(0).at(static_cast<Eigen::Index>(k)));
  Eigen::VectorXd p(static_cast<Eigen::Index>(axes.size()));
  for (std::size_t d = 0; d < axes.size(); ++d) {
    const auto c = static_cast<std::size_t>(axes[d].count);
    p(static_cast<Eigen::Index>(d)) = axes[d].at(static_cast<Eigen::Index>(k % c));
    k /= c;
  }
  return p;
}

namespace {

std::vector<Eigen::Index> unique_rows(const Eigen::MatrixXd& u) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(u.rows()));
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (u(a, j) != u(b, j)) return u(a, j) < u(b, j);
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  const double scale = std::max(u.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<char> keep(order.size(), 1);
  for (std::size_t i = 1; i < order.size(); ++i) {
    const double diff = (u.row(order[i]) - u.row(order[i - 1])).cwiseAbs().maxCoeff();
    if (diff <= 1e-14 * scale) keep[static_cast<std::size_t>(std::max(order[i], order[i - 1]))] = 0;
  }
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    if (keep[static_cast<std::size_t>(i)]) rows.push_back(i);
  return rows;
}

}  // namespace

std::vector<std::uint64_t> select_sdeim_points(const Eigen::MatrixXd& u, double* rcond_out) {
  PointSelection sel;
  double rc = 0.0;
  try {
    sel = qdeim_points(u);
    rc = inverse_condition(gather_rows(u, sel));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Selection) throw;
  }
  if (rc < 1e-12) {
    const std::vector<Eigen::Index> rows = unique_rows(u);
    Eigen::MatrixXd reduced(static_cast<Eigen::Index>(rows.size()), u.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) reduced.row(static_cast<Eigen::Index>(i)) = u.row(rows[i]);
    const PointSelection local = qdeim_points(reduced);
    sel.indices.clear();
    for (Eigen::Index i : local.indices) sel.indices.push_back(rows[static_cast<std::size_t>(i)]);
    rc = inverse_condition(gather_rows(u, sel));
    require(rc >= 1e-12, ErrorKind::Selection, "S^T U singular after duplicate-row exclusion");
  }
  if (rcond_out) *rcond_out = rc;
  std::vector<std::uint64_t> out;
  out.reserve(sel.size());
  for (Eigen::Index i : sel.indices) out.push_back(static_cast<std::uint64_t>(i));
  return out;
}

PathSample assemble_path_sample(const std::vector<TransformedFrame>& frames, const PodTail& tail,
                                const DiffOps& ops, const Eigen::VectorXd& p, double alpha, double gamma_s) {
  const Eigen::Index n_x = ops.n();
  const FrameMatrices vw = assemble_V_W(frames, tail, p, ops.d1_onesided);
  require(vw.v.rows() == 2 * n_x, ErrorKind::Dimension, "modes do not match the operator grid");
  const auto vt = vw.v.topRows(n_x);
  const auto vb = vw.v.bottomRows(n_x);
  const auto wt = vw.w.topRows(n_x);
  const auto wb = vw.w.bottomRows(n_x);

  PathSample s;
  s.m1 = vw.v.transpose() * vw.v;
  s.m1 = (0.5 * (s.m1 + s.m1.transpose())).eval();
  s.m2 = vw.w.transpose() * vw.w;
  s.m2 = (0.5 * (s.m2 + s.m2.transpose())).eval();
  s.n = vw.v.transpose() * vw.w;
  for (int c = 0; c < kAffineChannels; ++c) {
    const Eigen::MatrixXd av = apply_affine_block(ops, static_cast<AffineChannel>(c), vt);
    s.a1[static_cast<std::size_t>(c)] = vt.transpose() * av;
    s.a2[static_cast<std::size_t>(c)] = wt.transpose() * av;
  }

  const Eigen::Index r = vw.v.cols();
  const Eigen::MatrixXd u = assemble_U(frames, tail, p);
  const Eigen::Index m = u.cols();
  if (m == 0) {
    s.v_hat.resize(r, 0);
    s.w_hat.resize(r, 0);
    s.v_tilde.resize(0, r);
    return s;
  }
  s.selection = select_sdeim_points(u, &s.selection_rcond);
  PointSelection sel;
  for (auto i : s.selection) sel.indices.push_back(static_cast<Eigen::Index>(i));
  const Eigen::MatrixXd st_u = gather_rows(u, sel);
  const Eigen::MatrixXd inv = st_u.partialPivLu().inverse();
  s.v_hat = (alpha * (vt.transpose() * u) - gamma_s * (vb.transpose() * u)) * inv;
  s.w_hat = (alpha * (wt.transpose() * u) - gamma_s * (wb.transpose() * u)) * inv;
  s.v_tilde.resize(2 * m, r);
  for (Eigen::Index i = 0; i < m; ++i) {
    s.v_tilde.row(i) = vt.row(sel.indices[static_cast<std::size_t>(i)]);
    s.v_tilde.row(m + i) = vb.row(sel.indices[static_cast<std::size_t>(i)]);
  }
  return s;
}

PathTables sample_path_tables(const std::vector<TransformedFrame>& frames, const PodTail& tail, const DiffOps& ops,
                              const ActiveSubspace& subspace, const SamplingRequest& req) {
  PathTables t;
  t.subspace = subspace;
  if (subspace.dim == 1) {
    t.axes.push_back(SampleAxis::covering(req.lo, req.hi, req.step));
  } else {
    require(req.fallback_ranges.size() == frames.size(), ErrorKind::Offline,
            "two-dimensional sampling needs one range per path");
    for (const auto& r : req.fallback_ranges) t.axes.push_back(SampleAxis::covering(r[0], r[1], req.step));
  }
  std::size_t total = 1;
  for (const auto& a : t.axes) total *= static_cast<std::size_t>(a.count);
  t.samples.resize(total);

  unsigned workers = req.workers ? req.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(total);

  auto work = [&]() {
    for (std::size_t k = next++; k < total; k = next++) {
      const Eigen::VectorXd p = t.sample_point(k);
      try {
        t.samples[k] = assemble_path_sample(frames, tail, ops, p, req.alpha, req.gamma_s);
      } catch (const Error& e) {
        errors[k] = e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Drop failing samples at either end of a one-dimensional range when the
  // training paths do not reach them.
  std::size_t first = 0, last = total;
  if (subspace.dim == 1) {
    const SampleAxis& axis = t.axes.front();
    while (first < last && !errors[first].empty() && axis.at(static_cast<Eigen::Index>(first)) < req.need_lo) ++first;
    while (last > first && !errors[last - 1].empty() && axis.at(static_cast<Eigen::Index>(last - 1)) > req.need_hi)
      --last;
  }
  for (std::size_t k = first; k < last; ++k) {
    if (errors[k].empty()) continue;
    const Eigen::VectorXd p = t.sample_point(k);
    fail(ErrorKind::Offline, "path sample " + std::to_string(k) + " (p1 = " + std::to_string(p(0)) + "): " + errors[k]);
  }
  require(last > first, ErrorKind::Offline, "no path sample has a regular sDEIM system");
  if (first > 0 || last < total) {
    SampleAxis& axis = t.axes.front();
    spdlog::warn("sDEIM singular at {} end samples; sampling range trimmed to [{:.3f}, {:.3f}]", total - (last - first),
                 axis.at(static_cast<Eigen::Index>(first)), axis.at(static_cast<Eigen::Index>(last - 1)));
    t.samples = std::vector<PathSample>(std::make_move_iterator(t.samples.begin() + static_cast<std::ptrdiff_t>(first)),
                                        std::make_move_iterator(t.samples.begin() + static_cast<std::ptrdiff_t>(last)));
    axis.origin = axis.at(static_cast<Eigen::Index>(first));
    axis.count = static_cast<Eigen::Index>(last - first);
    total = last - first;
  }
  spdlog::debug("sampled {} path points", total);
  return t;
}

}  // namespace smor
