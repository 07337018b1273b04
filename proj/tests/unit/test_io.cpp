// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"

#include "synthetic.hpp"
#include "smor/core/errors.hpp"
#include "smor/core/model_io.hpp"
#include "smor/core/snapshot_io.hpp"

#include <doctest.h>

#include <cstring>
#include <fstream>
#include <functional>

using namespace smor;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

bool same_bits(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("snapshot file round trip") {
  const auto dir = testing::scratch_dir("io_snap");
  Eigen::MatrixXd m = testing::random_matrix(7, 3, 1);
  m(0, 0) = -0.0;
  m(1, 1) = 1e-310;
  io::write_matrix(dir / "a.smor", m);
  CHECK(same_bits(io::read_matrix(dir / "a.smor"), m));
  // Header layout: magic, version, rows, cols, reserved.
  std::ifstream in(dir / "a.smor", std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  CHECK(std::string(magic, 4) == "SMOR");
  CHECK(std::filesystem::file_size(dir / "a.smor") == 4 + 1 + 24 + 8 * 21);
  std::filesystem::remove_all(dir);
}

TEST_CASE("container round trip") {
  const auto dir = testing::scratch_dir("io_container");
  io::Container c;
  c.put("m", testing::random_matrix(4, 5, 2));
  c.put_scalar("s", 3.25);
  c.put_indices("idx", {0, 7, 42});
  c.put("empty", Eigen::MatrixXd(3, 0));
  c.save(dir / "c.smor");
  const io::Container d = io::Container::load(dir / "c.smor");
  CHECK(d.size() == 4);
  CHECK(same_bits(d.matrix("m"), c.matrix("m")));
  CHECK(d.scalar("s") == 3.25);
  CHECK(d.indices("idx") == std::vector<std::uint64_t>{0, 7, 42});
  CHECK(d.matrix("empty").rows() == 3);
  CHECK(kind_of([&] { (void)d.matrix("missing"); }) == ErrorKind::Format);
  CHECK(kind_of([&] { (void)d.indices("m"); }) == ErrorKind::Format);
  std::filesystem::remove_all(dir);
}

TEST_CASE("corrupted files are rejected") {
  const auto dir = testing::scratch_dir("io_bad");
  io::write_matrix(dir / "a.smor", testing::random_matrix(10, 10, 3));
  SUBCASE("bad magic") {
    std::fstream f(dir / "a.smor", std::ios::binary | std::ios::in | std::ios::out);
    f.write("XMOR", 4);
    f.close();
    CHECK(kind_of([&] { io::read_matrix(dir / "a.smor"); }) == ErrorKind::Format);
  }
  SUBCASE("truncated payload") {
    std::filesystem::resize_file(dir / "a.smor", 100);
    CHECK(kind_of([&] { io::read_matrix(dir / "a.smor"); }) == ErrorKind::Format);
  }
  SUBCASE("missing file") { CHECK(kind_of([&] { io::read_matrix(dir / "nope.smor"); }) == ErrorKind::Io); }
  SUBCASE("snapshot read as container") {
    CHECK(kind_of([&] { io::Container::load(dir / "a.smor"); }) == ErrorKind::Format);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("reduced model round trip is bit-identical") {
  const auto dir = testing::scratch_dir("io_model");
  ReducedModel m = synthetic::make_advection(0.5, 50.0, 100, 20.0, 3.0, 10.0).model;
  m.frames[0].smf_modes = testing::orthonormal(100, 1, 4);
  m.frames[0].nonlin_modes = testing::orthonormal(100, 2, 5);
  m.tail.temp_modes = testing::orthonormal(100, 1, 6);
  m.tail.smf_modes = testing::orthonormal(100, 1, 7);
  m.tail.nonlin_modes = testing::orthonormal(100, 1, 8);
  ActiveSubspace sub = m.tables.subspace;
  SamplingRequest req;
  req.lo = 0;
  req.hi = 3;
  req.step = 1;
  m.tables = sample_path_tables(m.frames, m.tail, DiffOps::build(m.grid), sub, req);
  m.tables.linear = true;
  m.a0 = testing::random_matrix(m.reduced_dim(), 1, 9).col(0);
  SwitchingStage sw;
  sw.t_switch = 12.5;
  sw.pre = build_pod_rom(testing::orthonormal(100, 2, 10), testing::orthonormal(100, 2, 11),
                         testing::orthonormal(100, 3, 12), DiffOps::build(m.grid), m.params.alpha, m.params.gamma_s);
  sw.a0_pre = testing::random_matrix(4, 1, 13).col(0);
  m.switching = sw;
  m.validate();

  save_model(m, dir / "model.smor");
  const ReducedModel r = load_model(dir / "model.smor");
  save_model(r, dir / "again.smor");
  std::ifstream a(dir / "model.smor", std::ios::binary), b(dir / "again.smor", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);

  CHECK(r.grid.n_x == m.grid.n_x);
  CHECK(r.params.v == m.params.v);
  CHECK(r.params.k == m.params.k);
  CHECK(same_bits(r.frames[0].temp_modes, m.frames[0].temp_modes));
  CHECK(same_bits(r.tail.nonlin_modes, m.tail.nonlin_modes));
  CHECK(r.tables.linear);
  REQUIRE(r.tables.sample_count() == m.tables.sample_count());
  for (std::size_t k = 0; k < m.tables.sample_count(); ++k) {
    CHECK(same_bits(r.tables.samples[k].m1, m.tables.samples[k].m1));
    CHECK(same_bits(r.tables.samples[k].a2[1], m.tables.samples[k].a2[1]));
    CHECK(same_bits(r.tables.samples[k].w_hat, m.tables.samples[k].w_hat));
    CHECK(r.tables.samples[k].selection == m.tables.samples[k].selection);
  }
  REQUIRE(r.switching.has_value());
  CHECK(r.switching->t_switch == 12.5);
  CHECK(same_bits(r.switching->pre.deim, sw.pre.deim));
  CHECK(same_bits(r.a0, m.a0));
  std::filesystem::remove_all(dir);
}
