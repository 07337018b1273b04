// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"

#include "smor/core/errors.hpp"
#include "smor/core/shift.hpp"

#include <doctest.h>

using namespace smor;

namespace {

Eigen::VectorXd mirrored(const Eigen::VectorXd& v) { return v.reverse(); }

Eigen::VectorXd bump(const Grid1D& g, double center, double width) {
  const Eigen::VectorXd x = g.nodes();
  return (-((x.array() - center) / width).square()).exp();
}

}  // namespace

TEST_CASE("shift by zero is the identity") {
  const Grid1D g = Grid1D::make(10.0, 50);
  const Eigen::VectorXd m = testing::random_matrix(50, 1, 1).col(0);
  for (auto e : {Extrapolation::Constant, Extrapolation::Zero, Extrapolation::Periodic})
    CHECK(shift_apply(ShiftOperator{g, e}, m, 0.0) == m);
}

TEST_CASE("whole-cell periodic shift is a circular index shift") {
  const Grid1D g = Grid1D::make(10.0, 50);
  const ShiftOperator op{g, Extrapolation::Periodic};
  const Eigen::VectorXd m = testing::random_matrix(50, 1, 2).col(0);
  for (int k : {1, 7, -3, 49}) {
    const Eigen::VectorXd out = shift_apply(op, m, k * g.dx());
    for (int i = 0; i < 50; ++i) REQUIRE(out(i) == m(((i - k) % 50 + 50) % 50));
  }
  // A shift by the full length returns the input.
  CHECK((shift_apply(op, m, g.length_m) - m).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("fractional shift is exact on cubics") {
  const Grid1D g = Grid1D::make(2.0, 40);
  const Eigen::VectorXd x = g.nodes();
  const Eigen::VectorXd cube = x.array().cube();
  const double p = 0.37 * g.dx();
  for (auto e : {Extrapolation::Constant, Extrapolation::Zero}) {
    const Eigen::VectorXd out = shift_apply(ShiftOperator{g, e}, cube, p);
    for (Eigen::Index i = 3; i < 37; ++i) REQUIRE(std::abs(out(i) - std::pow(x(i) - p, 3)) < 1e-10);
  }
}

TEST_CASE("constant extrapolation preserves constants") {
  const Grid1D g = Grid1D::make(10.0, 60);
  const ShiftOperator op{g, Extrapolation::Constant};
  for (double p : {0.1, -3.33, 7.9, 25.0}) CHECK((shift_apply(op, Eigen::VectorXd(Eigen::VectorXd::Constant(60, 2.5)), p).array() - 2.5).abs().maxCoeff() < 1e-14);
}

TEST_CASE("shift derivative of a constant vanishes") {
  const Grid1D g = Grid1D::make(10.0, 60);
  const DiffOps ops = DiffOps::build(g);
  const Eigen::VectorXd out =
      shift_derivative_apply(ShiftOperator{g, Extrapolation::Constant}, Eigen::VectorXd(Eigen::VectorXd::Ones(60)), 0.0, ops.d1_onesided);
  CHECK(out.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("shift derivative of a sine") {
  const Grid1D g = Grid1D::make(1.0, 200);
  const DiffOps ops = DiffOps::build(g);
  const Eigen::VectorXd x = g.nodes();
  const Eigen::VectorXd s = (2 * testing::kPi * x.array()).sin();
  const Eigen::VectorXd out = shift_derivative_apply(ShiftOperator{g, Extrapolation::Constant}, s, 0.0, ops.d1_onesided);
  const Eigen::VectorXd expect = -(2 * testing::kPi) * (2 * testing::kPi * x.array()).cos();
  const double dx = g.dx();
  // Sixth-order stencil: error ~ (2 pi)^7 dx^6 / 140.
  CHECK((out - expect).segment(3, 194).cwiseAbs().maxCoeff() < std::pow(2 * testing::kPi, 7) * std::pow(dx, 6));
}

TEST_CASE("shift derivative matches a finite difference in p") {
  const Grid1D g = Grid1D::make(1.0, 200);
  const DiffOps ops = DiffOps::build(g);
  const ShiftOperator op{g, Extrapolation::Constant};
  const Eigen::VectorXd x = g.nodes();
  const Eigen::VectorXd s = (2 * testing::kPi * x.array()).sin();
  const double p = 0.37 * g.dx();
  const double h = 1e-4 * g.dx();
  const Eigen::VectorXd fd = (shift_apply(op, s, p + h) - shift_apply(op, s, p - h)) / (2 * h);
  const Eigen::VectorXd an = shift_derivative_apply(op, s, p, ops.d1_onesided);
  const Eigen::VectorXd diff = (fd - an).segment(4, 192);
  CHECK(diff.norm() <= 1e-4 * an.segment(4, 192).norm());
}

TEST_CASE("finite difference in p converges at second order") {
  // On a cubic both the interpolation and the stencil are exact, so the only
  // error left is the central-difference truncation.
  const Grid1D g = Grid1D::make(1.0, 40);
  const DiffOps ops = DiffOps::build(g);
  const ShiftOperator op{g, Extrapolation::Constant};
  const Eigen::VectorXd x = g.nodes();
  const Eigen::VectorXd cube = x.array().cube();
  const double p = 0.5 * g.dx();
  const Eigen::VectorXd an = shift_derivative_apply(op, cube, p, ops.d1_onesided);
  auto err = [&](double h) {
    const Eigen::VectorXd fd = (shift_apply(op, cube, p + h) - shift_apply(op, cube, p - h)) / (2 * h);
    return (fd - an).segment(4, 32).norm();
  };
  const double e1 = err(0.2 * g.dx()), e2 = err(0.1 * g.dx());
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("assembled V and W at zero shift") {
  const Grid1D g = Grid1D::make(10.0, 30);
  const DiffOps ops = DiffOps::build(g);
  TransformedFrame f;
  f.shift_op = {g, Extrapolation::Constant};
  f.temp_modes = testing::random_matrix(30, 2, 3);
  f.smf_modes = testing::random_matrix(30, 1, 4);
  const FrameMatrices vw = assemble_V_W({f}, PodTail{}, Eigen::VectorXd::Zero(1), ops.d1_onesided);
  REQUIRE(vw.v.cols() == 3);
  CHECK(vw.v.topLeftCorner(30, 2) == f.temp_modes);
  CHECK(vw.v.bottomRightCorner(30, 1) == f.smf_modes);
  CHECK(vw.v.topRightCorner(30, 1).isZero(0));
  CHECK(vw.v.bottomLeftCorner(30, 2).isZero(0));
  const Eigen::MatrixXd d = Eigen::MatrixXd(ops.d1_onesided);
  CHECK(testing::rel(vw.w.topLeftCorner(30, 2), -d * f.temp_modes) < 1e-14);
  CHECK(testing::rel(vw.w.bottomRightCorner(30, 1), -d * f.smf_modes) < 1e-14);
}

TEST_CASE("mirrored frames give mirrored columns") {
  const Grid1D g = Grid1D::make(100.0, 120);
  const DiffOps ops = DiffOps::build(g);
  TransformedFrame right, left;
  right.shift_op = left.shift_op = {g, Extrapolation::Constant};
  right.temp_modes = bump(g, 70.0, 6.0);
  right.smf_modes = bump(g, 75.0, 9.0);
  left.temp_modes = mirrored(right.temp_modes.col(0));
  left.smf_modes = mirrored(right.smf_modes.col(0));
  const double a = 3.37 * g.dx();
  Eigen::VectorXd p(2);
  p << a, -a;
  const FrameMatrices vw = assemble_V_W({right, left}, PodTail{}, p, ops.d1_onesided);
  const Eigen::Index n = g.n();
  CHECK((vw.v.col(2).head(n) - mirrored(vw.v.col(0).head(n))).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((vw.v.col(3).tail(n) - mirrored(vw.v.col(1).tail(n))).cwiseAbs().maxCoeff() < 1e-12);
  // The derivative flips sign under mirroring.
  CHECK((vw.w.col(2).head(n) + mirrored(vw.w.col(0).head(n))).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("POD-only layout has a zero W") {
  const Grid1D g = Grid1D::make(10.0, 30);
  const DiffOps ops = DiffOps::build(g);
  PodTail tail;
  tail.temp_modes = testing::random_matrix(30, 2, 5);
  tail.smf_modes = testing::random_matrix(30, 2, 6);
  const FrameMatrices vw = assemble_V_W({}, tail, Eigen::VectorXd(0), ops.d1_onesided);
  CHECK(vw.v.cols() == 4);
  CHECK(vw.w.isZero(0));
}

TEST_CASE("coefficient arrangement skips the POD tail") {
  ModeLayout l;
  l.frame_begin = {0, 2};
  l.frame_size = {2, 2};
  l.pod_begin = 4;
  l.pod_size = 2;
  Eigen::VectorXd a(6);
  a << 1, 2, 3, 4, 5, 6;
  const Eigen::MatrixXd d = coefficient_arrangement(l, a);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(6, 2);
  expect(0, 0) = 1;
  expect(1, 0) = 2;
  expect(2, 1) = 3;
  expect(3, 1) = 4;
  CHECK(d == expect);
}

TEST_CASE("shift rejects non-finite paths") {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(10);
  CHECK_THROWS_AS(shift_apply(ShiftOperator{Grid1D::make(1, 10), Extrapolation::Zero}, ones, std::nan("")), Error);
}
