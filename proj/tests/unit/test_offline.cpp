// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"

#include "smor/core/errors.hpp"
#include "smor/core/offline.hpp"
#include "smor/core/path_tables.hpp"

#include <doctest.h>

#include <numeric>

using namespace smor;

namespace {

// Ramp-like temperature with a left-going front at xl and a right-going one at xr.
Eigen::VectorXd plateau(const Eigen::VectorXd& x, double xl, double xr, double w) {
  return 0.5 * (((x.array() - xl) / w).tanh() - ((x.array() - xr) / w).tanh());
}

std::vector<double> iota_times(std::size_t s, double dt = 1.0) {
  std::vector<double> t(s);
  for (std::size_t i = 0; i < s; ++i) t[i] = dt * static_cast<double>(i);
  return t;
}

}  // namespace

TEST_CASE("tracking a diverging pair of fronts") {
  const Grid1D g = Grid1D::make(100.0, 400);
  const DiffOps ops = DiffOps::build(g);
  const Eigen::VectorXd x = g.nodes();
  const std::size_t s = 11;
  Eigen::MatrixXd temp(g.n(), static_cast<Eigen::Index>(s));
  for (std::size_t j = 0; j < s; ++j) {
    const double shift = 2.0 * static_cast<double>(j);
    temp.col(static_cast<Eigen::Index>(j)) = plateau(x, 40.0 - shift, 60.0 + shift, 1.5);
  }
  const PathTrajectory t = track_fronts(temp, ops.d1, g.dx(), iota_times(s));
  REQUIRE(t.frames() == 2);
  CHECK(t.raw_paths.col(0).isZero(0));
  CHECK(t.origin(kRightFrame) == doctest::Approx(60.0).epsilon(g.dx()));
  CHECK(t.origin(kLeftFrame) == doctest::Approx(40.0).epsilon(g.dx()));
  for (std::size_t j = 0; j < s; ++j) {
    const double expect = 2.0 * static_cast<double>(j);
    CHECK(std::abs(t.raw_paths(kRightFrame, static_cast<Eigen::Index>(j)) - expect) <= g.dx());
    CHECK(std::abs(t.raw_paths(kLeftFrame, static_cast<Eigen::Index>(j)) + expect) <= g.dx());
  }
}

TEST_CASE("front positions resolve sub-cell offsets") {
  const Grid1D g = Grid1D::make(100.0, 400);
  const DiffOps ops = DiffOps::build(g);
  for (double off : {0.0, 0.2, 0.37, 0.5, 0.81}) {
    const double xl = 40.0 + off * g.dx(), xr = 60.0 + off * g.dx();
    const Eigen::Vector2d pos = front_positions(plateau(g.nodes(), xl, xr, 1.5), ops.d1, g.dx());
    CHECK(std::abs(pos(kRightFrame) - xr) < 0.05 * g.dx());
    CHECK(std::abs(pos(kLeftFrame) - xl) < 0.05 * g.dx());
  }
}

TEST_CASE("a stationary profile has zero paths") {
  const Grid1D g = Grid1D::make(100.0, 200);
  const DiffOps ops = DiffOps::build(g);
  const Eigen::VectorXd col = plateau(g.nodes(), 30.0, 70.0, 2.0);
  const Eigen::MatrixXd temp = col.replicate(1, 5);
  const PathTrajectory t = track_fronts(temp, ops.d1, g.dx(), iota_times(5));
  CHECK(t.raw_paths.isZero(0));
}

TEST_CASE("a flat profile cannot be tracked") {
  const Grid1D g = Grid1D::make(100.0, 200);
  const DiffOps ops = DiffOps::build(g);
  CHECK_THROWS_AS(track_fronts(Eigen::MatrixXd::Constant(200, 2, 3.0), ops.d1, g.dx(), iota_times(2)), Error);
}

TEST_CASE("reanchoring moves the origin") {
  PathTrajectory t;
  t.times = iota_times(3);
  t.raw_paths = Eigen::MatrixXd::Zero(2, 3);
  t.raw_paths.row(0) << 0, 1, 2;
  t.raw_paths.row(1) << 0, -1, -2;
  t.smooth_paths = t.raw_paths;
  t.origin = Eigen::Vector2d(60, 40);
  reanchor_paths(t, Eigen::Vector2d(58, 41));
  CHECK(t.raw_paths(0, 0) == 2.0);
  CHECK(t.raw_paths(1, 2) == -3.0);
  CHECK(t.origin == Eigen::Vector2d(58, 41));
}

TEST_CASE("full linear smoothing reproduces affine paths") {
  PathTrajectory t;
  t.times = iota_times(20, 0.5);
  t.raw_paths.resize(2, 20);
  for (Eigen::Index j = 0; j < 20; ++j) {
    t.raw_paths(0, j) = 1.5 * t.times[static_cast<std::size_t>(j)];
    t.raw_paths(1, j) = -0.7 * t.times[static_cast<std::size_t>(j)];
  }
  t.origin = Eigen::Vector2d::Zero();
  const PathTrajectory s = smooth_paths(t, {SmoothingMode::FullLinear, 1.0});
  CHECK((s.smooth_paths - t.raw_paths).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("full linear smoothing of a staircase") {
  PathTrajectory t;
  t.times = iota_times(101);
  t.raw_paths.resize(2, 101);
  for (Eigen::Index j = 0; j < 101; ++j) {
    t.raw_paths(0, j) = std::floor(static_cast<double>(j) / 10.0);
    t.raw_paths(1, j) = -t.raw_paths(0, j);
  }
  t.origin = Eigen::Vector2d::Zero();
  const PathTrajectory s = smooth_paths(t, {SmoothingMode::FullLinear, 1.0});
  // Endpoints kept, interior on the chord.
  CHECK(s.smooth_paths(0, 0) == 0.0);
  CHECK(s.smooth_paths(0, 100) == 10.0);
  CHECK(s.smooth_paths(0, 37) == doctest::Approx(3.7));
  CHECK((s.smooth_paths - t.raw_paths).cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("tail smoothing keeps the leading samples") {
  PathTrajectory t;
  t.times = iota_times(1000);
  t.raw_paths = testing::random_matrix(2, 1000, 11);
  t.origin = Eigen::Vector2d::Zero();
  const PathTrajectory s = smooth_paths(t, {SmoothingMode::TailLinear, 0.985});
  CHECK(s.smooth_paths.leftCols(15) == t.raw_paths.leftCols(15));
  // The remainder is the chord from sample 15 to the last sample.
  for (Eigen::Index j = 15; j < 1000; ++j) {
    const double w = (static_cast<double>(j) - 15.0) / 984.0;
    const Eigen::Vector2d chord = (1 - w) * t.raw_paths.col(15) + w * t.raw_paths.col(999);
    REQUIRE((s.smooth_paths.col(j) - chord).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("wave separation of a co-moving pair") {
  // Two bumps travelling apart with known paths collapse to rank one per frame.
  const Grid1D g = Grid1D::make(100.0, 300);
  const ShiftOperator op{g, Extrapolation::Constant};
  const Eigen::VectorXd x = g.nodes();
  const Eigen::Index s = 8;
  Eigen::MatrixXd paths(2, s), snaps(g.n(), s);
  for (Eigen::Index j = 0; j < s; ++j) {
    const double d = 1.3 * static_cast<double>(j);
    paths(kRightFrame, j) = d;
    paths(kLeftFrame, j) = -d;
    snaps.col(j) = (-((x.array() - 65.0 - d) / 4.0).square()).exp() + (-((x.array() - 35.0 + d) / 4.0).square()).exp();
  }
  const auto co = separate_waves(snaps, paths, op);
  REQUIRE(co.size() == 2);
  for (const auto& m : co) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    CHECK(svd.singularValues()(1) < 1e-3 * svd.singularValues()(0));
  }
  // Masking: the right frame has nothing on the left half at p = 0.
  CHECK(co[kRightFrame].col(0).head(150).isZero(0));
  CHECK(co[kLeftFrame].col(0).tail(150).isZero(0));
}

TEST_CASE("wave separation at zero paths only masks") {
  const Grid1D g = Grid1D::make(10.0, 40);
  const Eigen::MatrixXd snaps = testing::random_matrix(40, 3, 12);
  const auto co = separate_waves(snaps, Eigen::MatrixXd::Zero(2, 3), ShiftOperator{g, Extrapolation::Zero});
  CHECK(co[kRightFrame].bottomRows(20) == snaps.bottomRows(20));
  CHECK(co[kLeftFrame].topRows(20) == snaps.topRows(20));
}

TEST_CASE("frame bases have the requested counts") {
  const Grid1D g = Grid1D::make(10.0, 40);
  std::vector<Eigen::MatrixXd> t{testing::random_matrix(40, 10, 1), testing::random_matrix(40, 10, 2)};
  std::vector<Eigen::MatrixXd> s{testing::random_matrix(40, 10, 3), testing::random_matrix(40, 10, 4)};
  std::vector<Eigen::MatrixXd> f{testing::random_matrix(40, 10, 5), testing::random_matrix(40, 10, 6)};
  const auto frames = build_frame_bases(t, s, f, FrameModeCounts{3, 2, 5}, ShiftOperator{g, Extrapolation::Constant});
  REQUIRE(frames.size() == 2);
  for (const auto& fr : frames) {
    CHECK(fr.temp_modes.cols() == 3);
    CHECK(fr.smf_modes.cols() == 2);
    CHECK(fr.nonlin_modes.cols() == 5);
    CHECK((fr.temp_modes.transpose() * fr.temp_modes - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  }
}

TEST_CASE("coefficient extrapolation") {
  const std::vector<double> fit = iota_times(10);
  const std::vector<double> target{12.0, 20.0};
  SUBCASE("affine data is reproduced at degree one") {
    Eigen::MatrixXd c(1, 10);
    for (int j = 0; j < 10; ++j) c(0, j) = 2.0 - 0.5 * j;
    const Eigen::MatrixXd e = extrapolate_coefficients(fit, c, 1, target);
    CHECK(e(0, 0) == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(e(0, 1) == doctest::Approx(-8.0).epsilon(1e-12));
  }
  SUBCASE("quadratic data is reproduced at degree two") {
    Eigen::MatrixXd c(1, 10);
    for (int j = 0; j < 10; ++j) c(0, j) = 1.0 + j + 0.25 * j * j;
    const Eigen::MatrixXd e = extrapolate_coefficients(fit, c, 2, target);
    CHECK(e(0, 0) == doctest::Approx(1 + 12 + 36.0).epsilon(1e-10));
    CHECK(e(0, 1) == doctest::Approx(1 + 20 + 100.0).epsilon(1e-10));
  }
  SUBCASE("noisy affine data stays close") {
    const double sigma = 1e-3;
    Eigen::MatrixXd c = sigma * testing::random_matrix(1, 10, 21);
    for (int j = 0; j < 10; ++j) c(0, j) += 3.0 * j;
    const Eigen::MatrixXd e = extrapolate_coefficients(fit, c, 1, target);
    CHECK(std::abs(e(0, 1) - 60.0) <= 10 * sigma);
  }
  CHECK_THROWS_AS(extrapolate_coefficients({0.0}, Eigen::MatrixXd::Ones(1, 1), 1, target), Error);
}

TEST_CASE("residual POD") {
  const Eigen::MatrixXd snaps = testing::random_matrix(30, 6, 31);
  SUBCASE("zero modes give an empty basis") {
    const PodBasis b = residual_pod(snaps, snaps, 0);
    CHECK(b.modes.rows() == 30);
    CHECK(b.modes.cols() == 0);
  }
  SUBCASE("zero residual energy is an error") { CHECK_THROWS_AS(residual_pod(snaps, snaps, 1), Error); }
  SUBCASE("a standing profile is recovered") {
    const Eigen::VectorXd standing = testing::orthonormal(30, 1, 32).col(0);
    Eigen::RowVectorXd amp(6);
    amp << 1, 2, 3, 4, 5, 6;
    const Eigen::MatrixXd recon = snaps - standing * amp;
    const PodBasis b = residual_pod(snaps, recon, 1);
    CHECK(std::abs(std::abs(b.modes.col(0).dot(standing)) - 1.0) < 1e-12);
  }
}

TEST_CASE("active subspace detection") {
  const Eigen::RowVectorXd t = Eigen::RowVectorXd::LinSpaced(50, 0.0, 100.0);
  SUBCASE("mirrored paths") {
    Eigen::MatrixXd p(2, 50);
    p << t, -t;
    const ActiveSubspace s = detect_active_subspace(p);
    CHECK(s.dim == 1);
    CHECK(s.direction(0) == 1.0);
    CHECK(s.direction(1) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("tiny noise keeps one dimension") {
    Eigen::MatrixXd p(2, 50);
    p << t, -t;
    p += 1e-9 * testing::random_matrix(2, 50, 41);
    CHECK(detect_active_subspace(p).dim == 1);
  }
  SUBCASE("unequal speeds on one line") {
    Eigen::MatrixXd p(2, 50);
    p << t, 0.5 * t;
    const ActiveSubspace s = detect_active_subspace(p);
    CHECK(s.dim == 1);
    CHECK(s.direction(1) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("independent paths need two dimensions") {
    Eigen::MatrixXd p(2, 50);
    p << t, t.array().square() / 100.0;
    CHECK(detect_active_subspace(p).dim == 2);
  }
}
