// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"

#include "smor/core/config.hpp"
#include "smor/core/errors.hpp"

#include <doctest.h>

#include <fstream>

using namespace smor;

TEST_CASE("presets") {
  const ExperimentConfig desk = make_preset("desk", Case::SeparatedWaves);
  CHECK(desk.grid.n_x == 750);
  CHECK(desk.grid.dx() == doctest::Approx(4.0 / 3.0));
  CHECK(desk.sampling.step == doctest::Approx(8.0 / 3.0));
  CHECK(desk.t_final == 1400.0);
  CHECK(desk.test_betas.size() == 81);
  CHECK(desk.test_betas.front() == 540.0);
  CHECK(desk.test_betas.back() == 580.0);

  const ExperimentConfig paper = make_preset("paper", Case::SeparatedWaves);
  CHECK(paper.grid.n_x == 3000);
  CHECK(paper.sampling.step == doctest::Approx(20.0 / 3.0));
  CHECK(paper.sampling.hi == 300.0);

  const ExperimentConfig gauss = make_preset("paper", Case::Gaussian);
  CHECK(gauss.t_final == 2100.0);
  CHECK(gauss.sampling.step == doctest::Approx(1.0 / 3.0));
  CHECK(gauss.sampling.hi == 500.0);
  CHECK(gauss.gaussian.t_switch == 100.0);

  CHECK_THROWS_AS(make_preset("huge", Case::Gaussian), Error);
}

TEST_CASE("JSON overrides and round trip") {
  ExperimentConfig c = make_preset("desk", Case::SeparatedWaves);
  apply_json(c, R"({"grid": {"n_x": 300}, "fire": {"beta": 560}, "test_betas": {"min": 545, "max": 555, "count": 3},
                    "sampling": {"interpolation": "linear"}, "modes": {"frame_modes": 3}})");
  CHECK(c.grid.n_x == 300);
  CHECK(c.fire.beta == 560.0);
  CHECK(c.test_betas == std::vector<double>{545.0, 550.0, 555.0});
  CHECK(c.linear_tables);
  CHECK(c.frame_counts().nonlin == 6);

  ExperimentConfig d = make_preset("desk", Case::SeparatedWaves);
  apply_json(d, to_json(c));
  CHECK(d.digest() == c.digest());
  CHECK(to_json(d) == to_json(c));
}

TEST_CASE("digest ignores output locations and worker counts") {
  ExperimentConfig a = make_preset("desk", Case::SeparatedWaves);
  ExperimentConfig b = a;
  b.out_dir = "/somewhere/else";
  b.workers = 7;
  CHECK(a.digest() == b.digest());
  b.fire.k = 0.3;
  CHECK(a.digest() != b.digest());
  CHECK(a.digest().size() == 16);
}

TEST_CASE("invalid configs are rejected") {
  ExperimentConfig c = make_preset("desk", Case::SeparatedWaves);
  auto kind = [&](const std::string& text) {
    try {
      ExperimentConfig tmp = c;
      apply_json(tmp, text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  CHECK(kind("{not json") == ErrorKind::InvalidInput);
  CHECK(kind(R"({"unknown": 1})") == ErrorKind::InvalidInput);
  CHECK(kind(R"({"t_final": "long"})") == ErrorKind::InvalidInput);
  CHECK(kind(R"({"grid": {"n_x": 4}})") == ErrorKind::InvalidInput);
  CHECK(kind(R"({"train_betas": []})") == ErrorKind::InvalidInput);
  CHECK(kind(R"({"sampling": {"step": 0}})") == ErrorKind::InvalidInput);
  CHECK(kind(R"({"case": "gaussian", "gaussian": {"t_switch": 5000}})") == ErrorKind::InvalidInput);
  CHECK(kind(R"({"sampling": {"interpolation": "cubic"}})") == ErrorKind::InvalidInput);
}

TEST_CASE("config files pick the case before the preset") {
  const auto dir = testing::scratch_dir("config");
  std::ofstream(dir / "c.json") << R"({"case": "gaussian", "preset": "paper", "t_final": 300})";
  const ExperimentConfig c = load_config(dir / "c.json", "");
  CHECK(c.experiment == Case::Gaussian);
  CHECK(c.grid.n_x == 3000);
  CHECK(c.sampling.step == doctest::Approx(1.0 / 3.0));
  CHECK(c.t_final == 300.0);
  const ExperimentConfig d = load_config(dir / "c.json", "desk");
  CHECK(d.grid.n_x == 750);
  CHECK_THROWS_AS(load_config(dir / "missing.json", ""), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("linspace") {
  CHECK(linspace(0, 1, 5) == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(linspace(3, 7, 1) == std::vector<double>{3});
  CHECK(linspace(540, 580, 81)[40] == 560.0);
}
