// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/integrate.hpp"

#include "smor/core/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace smor {

void IntegratorConfig::validate() const {
  require(rtol > 0 && atol > 0, ErrorKind::InvalidInput, "integrator tolerances must be positive");
  require(h_init > 0, ErrorKind::InvalidInput, "h_init must be positive");
  require(h_max >= h_init, ErrorKind::InvalidInput, "h_max must be >= h_init");
  require(max_steps > 0, ErrorKind::InvalidInput, "max_steps must be positive");
}

std::vector<double> uniform_times(double t0, double tf, double dt) {
  require(dt > 0 && tf >= t0, ErrorKind::InvalidInput, "invalid uniform time grid");
  const auto n = static_cast<std::size_t>(std::floor((tf - t0) / dt + 1e-9));
  std::vector<double> t;
  t.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t.push_back(std::min(t0 + static_cast<double>(i) * dt, tf));
  return t;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// error weights: b - bhat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

OdeSolution solve_ivp(const RhsFunction& rhs, const Eigen::VectorXd& y0, double t0, double tf,
                      std::span<const double> output_times, const IntegratorConfig& cfg) {
  cfg.validate();
  require(tf > t0, ErrorKind::InvalidInput, "t_span must satisfy tf > t0");
  require(!output_times.empty(), ErrorKind::InvalidInput, "no output times requested");
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    const double t = output_times[i];
    require(t >= t0 && t <= tf, ErrorKind::InvalidInput, "output time outside [t0, tf]");
    require(i == 0 || t > output_times[i - 1], ErrorKind::InvalidInput, "output times must be strictly increasing");
  }
  require(all_finite(y0), ErrorKind::InvalidInput, "non-finite initial state");

  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n = y0.size();
  const double span = tf - t0;
  const double h_min = 1e-14 * span;

  OdeSolution sol;
  sol.times.assign(output_times.begin(), output_times.end());
  sol.states.resize(n, static_cast<Eigen::Index>(output_times.size()));

  Eigen::VectorXd y = y0, y_new(n), y_stage(n), err(n);
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

  std::size_t next_out = 0;
  while (next_out < output_times.size() && output_times[next_out] == t0) {
    sol.states.col(static_cast<Eigen::Index>(next_out++)) = y;
  }

  double t = t0;
  double h = std::min(cfg.h_init, cfg.h_max);
  rhs(t, y, k1);
  ++sol.n_rhs;
  if (!all_finite(k1)) fail(ErrorKind::Divergence, "non-finite derivative at t0");

  std::size_t steps = 0;
  while (next_out < output_times.size()) {
    if (steps++ >= cfg.max_steps) {
      std::ostringstream os;
      os << "max_steps (" << cfg.max_steps << ") exceeded at t = " << t;
      fail(ErrorKind::Budget, os.str());
    }
    const double target = output_times[next_out];
    double h_try = std::min(h, target - t);
    bool hits_output = false;
    // Avoid leaving a sliver shorter than a percent of the step before an output.
    if (t + h_try >= target || target - (t + h_try) < 1e-2 * h_try) {
      h_try = target - t;
      hits_output = true;
    }
    if (h_try < h_min) {
      std::ostringstream os;
      os << "step size underflow (h = " << h_try << ") at t = " << t;
      fail(ErrorKind::Stiffness, os.str());
    }

    y_stage = y + h_try * (a21 * k1);
    rhs(t + c2 * h_try, y_stage, k2);
    y_stage = y + h_try * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h_try, y_stage, k3);
    y_stage = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h_try, y_stage, k4);
    y_stage = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h_try, y_stage, k5);
    y_stage = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h_try, y_stage, k6);
    y_new = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double t_new = hits_output ? target : t + h_try;
    rhs(t_new, y_new, k7);
    sol.n_rhs += 6;

    err = h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale = cfg.atol + cfg.rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      err_norm = std::max(err_norm, std::abs(err(i)) / scale);
    }
    if (!std::isfinite(err_norm)) err_norm = 1e10;

    if (err_norm <= 1.0) {
      if (!all_finite(y_new) || !all_finite(k7)) {
        std::ostringstream os;
        os << "non-finite state at t = " << t_new;
        fail(ErrorKind::Divergence, os.str());
      }
      ++sol.n_accepted;
      t = t_new;
      y.swap(y_new);
      k1.swap(k7);
      const double factor =
          err_norm == 0.0 ? kMaxFactor : std::clamp(kSafety * std::pow(err_norm, -0.2), kMinFactor, kMaxFactor);
      const double proposal = std::min(cfg.h_max, h_try * factor);
      // A step shortened to hit an output says nothing about the natural step size.
      h = hits_output ? std::max(proposal, std::min(h, cfg.h_max)) : proposal;
      if (hits_output) sol.states.col(static_cast<Eigen::Index>(next_out++)) = y;
    } else {
      ++sol.n_rejected;
      h = h_try * std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2));
    }
  }

  sol.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace smor
