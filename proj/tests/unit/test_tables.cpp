// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"
#include "synthetic.hpp"

#include "smor/core/offline.hpp"
#include "smor/core/errors.hpp"
#include "smor/core/path_tables.hpp"

#include <doctest.h>

using namespace smor;

namespace {

Eigen::MatrixXd bumps(const Grid1D& g, double center, int count) {
  const Eigen::VectorXd x = g.nodes();
  Eigen::MatrixXd m(g.n(), count);
  for (int k = 0; k < count; ++k)
    m.col(k) = (-((x.array() - center - 1.5 * k) / (3.0 + k)).square()).exp() * (1.0 + 0.1 * k * (x.array() - center));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(g.n(), count);
}

struct Fixture {
  Grid1D grid = Grid1D::make(100.0, 200);
  DiffOps ops = DiffOps::build(grid);
  std::vector<TransformedFrame> frames;

  explicit Fixture(int modes = 2) {
    const ShiftOperator op{grid, Extrapolation::Constant};
    for (double c : {70.0, 30.0}) {
      TransformedFrame f;
      f.shift_op = op;
      f.temp_modes = bumps(grid, c, modes);
      f.smf_modes = bumps(grid, c + 2.0, modes);
      f.nonlin_modes = bumps(grid, c - 1.0, 2 * modes);
      frames.push_back(f);
    }
  }
};

ActiveSubspace mirrored() {
  ActiveSubspace s;
  s.direction = Eigen::Vector2d(1.0, -1.0);
  s.singular_values = Eigen::Vector2d(1.0, 0.0);
  return s;
}

}  // namespace

TEST_CASE("sample matrices at zero shift") {
  Fixture fx;
  const Eigen::VectorXd p = Eigen::VectorXd::Zero(2);
  const PathSample s = assemble_path_sample(fx.frames, PodTail{}, fx.ops, p, 187.93, 0.1625);
  const FrameMatrices vw = assemble_V_W(fx.frames, PodTail{}, p, fx.ops.d1_onesided);
  CHECK(testing::rel(s.m1, vw.v.transpose() * vw.v) < 1e-14);
  CHECK(testing::rel(s.m2, vw.w.transpose() * vw.w) < 1e-14);
  CHECK(testing::rel(s.n, vw.v.transpose() * vw.w) < 1e-14);
  // Orthonormal modes within one frame and variable.
  CHECK((s.m1.topLeftCorner(2, 2) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-13);
  CHECK(s.v_tilde.rows() == 2 * 8);
  CHECK(s.selection.size() == 8);
}

TEST_CASE("Gram matrices are symmetric positive semidefinite") {
  Fixture fx;
  for (double xi : {-7.3, 0.0, 12.1}) {
    const PathSample s = assemble_path_sample(fx.frames, PodTail{}, fx.ops, Eigen::Vector2d(xi, -xi), 187.93, 0.1625);
    for (const Eigen::MatrixXd* m : {&s.m1, &s.m2}) {
      CHECK((*m - m->transpose()).norm() == 0.0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*m);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
    }
  }
}

TEST_CASE("sDEIM reproduces nonlinearities in the span of U") {
  Fixture fx;
  const Eigen::Vector2d p(4.37, -4.37);
  const double alpha = 187.93, gamma_s = 0.1625;
  const PathSample s = assemble_path_sample(fx.frames, PodTail{}, fx.ops, p, alpha, gamma_s);
  const Eigen::MatrixXd u = assemble_U(fx.frames, PodTail{}, p);
  const FrameMatrices vw = assemble_V_W(fx.frames, PodTail{}, p, fx.ops.d1_onesided);
  const Eigen::Index n = fx.grid.n();
  const Eigen::VectorXd f = u * testing::random_matrix(u.cols(), 1, 7).col(0);
  Eigen::VectorXd f_at(static_cast<Eigen::Index>(s.selection.size()));
  for (std::size_t i = 0; i < s.selection.size(); ++i) f_at(static_cast<Eigen::Index>(i)) = f(static_cast<Eigen::Index>(s.selection[i]));
  const Eigen::VectorXd expect_v = alpha * vw.v.topRows(n).transpose() * f - gamma_s * vw.v.bottomRows(n).transpose() * f;
  const Eigen::VectorXd expect_w = alpha * vw.w.topRows(n).transpose() * f - gamma_s * vw.w.bottomRows(n).transpose() * f;
  CHECK(testing::rel(s.v_hat * f_at, expect_v) < 1e-9);
  CHECK(testing::rel(s.w_hat * f_at, expect_w) < 1e-9);
  CHECK(s.selection_rcond >= 1e-12);
}

TEST_CASE("duplicate rows are excluded from the selection") {
  // Identical rows make the first QDEIM pass pick a singular set only if the
  // basis is built that way; the retry must always produce distinct rows.
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(6, 2);
  u << 1, 0, 1, 0, 0, 1, 0, 1, 0.5, 0.5, 0, 0;
  double rc = 0.0;
  const auto sel = select_sdeim_points(u, &rc);
  REQUIRE(sel.size() == 2);
  CHECK(sel[0] != sel[1]);
  CHECK(rc >= 1e-12);
}

TEST_CASE("nearest-sample lookup") {
  const SampleAxis a = SampleAxis::covering(0.0, 300.0, 20.0 / 3.0);
  CHECK(a.count == 46);
  CHECK(a.nearest(3.4) == 1);
  CHECK(a.nearest(3.3) == 0);
  bool clamped = false;
  CHECK(a.nearest(-5.0, &clamped) == 0);
  CHECK(clamped);
  CHECK(a.nearest(310.0, &clamped) == 45);
  CHECK(clamped);
  CHECK(a.nearest(150.0, &clamped) == 22);
  CHECK_FALSE(clamped);
}

TEST_CASE("tables are sampled in grid order and deterministically") {
  Fixture fx(1);
  SamplingRequest req;
  req.lo = -10;
  req.hi = 10;
  req.step = 2.5;
  req.workers = 1;
  const PathTables serial = sample_path_tables(fx.frames, PodTail{}, fx.ops, mirrored(), req);
  req.workers = 4;
  const PathTables threaded = sample_path_tables(fx.frames, PodTail{}, fx.ops, mirrored(), req);
  REQUIRE(serial.sample_count() == 9);
  for (std::size_t k = 0; k < 9; ++k) {
    CHECK(serial.samples[k].m1 == threaded.samples[k].m1);
    CHECK(serial.samples[k].v_hat == threaded.samples[k].v_hat);
    CHECK(serial.samples[k].selection == threaded.samples[k].selection);
  }
  CHECK(serial.sample_point(2)(0) == doctest::Approx(-5.0));
  CHECK(serial.sample_point(2)(1) == doctest::Approx(5.0));
  CHECK(serial.locate(Eigen::Vector2d(4.0, -4.0)) == 6);
}

TEST_CASE("nearest-sample Gram error is bounded by the step") {
  Fixture fx;
  SamplingRequest req;
  req.lo = 0;
  req.hi = 20;
  req.step = 20.0 / 3.0;
  const PathTables t = sample_path_tables(fx.frames, PodTail{}, fx.ops, mirrored(), req);
  double n_max = 0;
  for (const auto& s : t.samples) n_max = std::max(n_max, s.n.norm());
  for (double xi : {1.0, 3.3, 9.9, 14.2}) {
    const Eigen::Vector2d p(xi, -xi);
    const std::size_t k = t.locate(p);
    const PathSample exact = assemble_path_sample(fx.frames, PodTail{}, fx.ops, p, 187.93, 0.1625);
    const double dist = std::abs(xi - t.sample_point(k)(0));
    CHECK(dist <= 0.5 * req.step + 1e-12);
    // dM1/dxi is built from N, so the error is at most ~ 2 |N| times the distance.
    CHECK((exact.m1 - t.samples[k].m1).norm() <= 3.0 * n_max * dist + 1e-12);
  }
}

TEST_CASE("projection error decreases with more modes") {
  Fixture big(3);
  const Eigen::Index n = big.grid.n();
  const std::vector<double> times{0.0, 1.0, 2.0, 3.0};
  Eigen::MatrixXd paths(2, 4);
  paths << 0, 1.2, 2.4, 3.6, 0, -1.2, -2.4, -3.6;
  // States built from the three-mode basis plus a little noise.
  Eigen::MatrixXd states(2 * n, 4);
  for (Eigen::Index j = 0; j < 4; ++j) {
    const Eigen::MatrixXd v = assemble_V(big.frames, PodTail{}, paths.col(j));
    Eigen::VectorXd c(v.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = std::pow(0.3, static_cast<double>(i % 3)) * (1.0 + 0.1 * j);
    states.col(j) = v * c;
  }
  states += 1e-6 * testing::random_matrix(2 * n, 4, 9);
  double prev_t = 2.0, prev_s = 2.0;
  for (int r = 1; r <= 3; ++r) {
    std::vector<TransformedFrame> fr = big.frames;
    for (auto& f : fr) {
      f.temp_modes = f.temp_modes.leftCols(r).eval();
      f.smf_modes = f.smf_modes.leftCols(r).eval();
    }
    const Eigen::Vector2d e = projection_error(fr, PodTail{}, states, paths, times);
    CHECK(e(0) <= prev_t);
    CHECK(e(1) <= prev_s);
    prev_t = e(0);
    prev_s = e(1);
  }
  CHECK(prev_t < 1e-4);
}

TEST_CASE("singular samples beyond the training paths are trimmed") {
  const ReducedModel m = synthetic::two_frame_model(false);
  ActiveSubspace sub = m.tables.subspace;
  SamplingRequest req;
  req.lo = 0;
  req.hi = 80;
  req.step = 5;
  req.need_lo = 0;
  req.need_hi = 10;
  const PathTables t = sample_path_tables(m.frames, m.tail, DiffOps::build(m.grid), sub, req);
  REQUIRE(t.axes.size() == 1);
  CHECK(t.axes[0].origin == 0.0);
  CHECK(t.axes[0].count < 17);
  CHECK(t.axes[0].end() >= 10.0);
  CHECK(t.sample_count() == static_cast<std::size_t>(t.axes[0].count));

  req.need_hi = 80;
  CHECK_THROWS_AS(sample_path_tables(m.frames, m.tail, DiffOps::build(m.grid), sub, req), Error);
}
